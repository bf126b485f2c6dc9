"""Assessment documents and the `cohere` command line.

Assessments can be written as small text documents: declare atoms, state
previsions on conditional expressions, optionally end with a query.  The
same files drive the `cohere` CLI (check / extend / mp / dutchbook /
table); this script runs the CLI entry point in-process.
"""

import tempfile
from pathlib import Path

from coherekit.cli import main

DOCUMENT = """\
# a rule, a nested conditional on it, and a conclusion to bound
atoms A C H
assess P(A given H) = 1/2
assess P(C given (A given H)) = 1/2
query extend C
"""

print("document:")
print(DOCUMENT)

with tempfile.TemporaryDirectory() as workdir:
    path = Path(workdir) / "assessment.cohere"
    path.write_text(DOCUMENT, encoding="utf-8")

    print("$ cohere check assessment.cohere")
    code = main(["check", str(path)])
    print(f"(exit {code})\n")

    print("$ cohere extend assessment.cohere")
    code = main(["extend", str(path)])
    print(f"(exit {code})\n")

    print("$ cohere table assessment.cohere --target '(C given (A given H))'")
    code = main(["table", str(path), "--target", "(C given (A given H))"])
    print(f"(exit {code})\n")

    print("$ cohere mp --x 1/2 --y 1/2")
    code = main(["mp", "--x", "1/2", "--y", "1/2"])
    print(f"(exit {code})")
