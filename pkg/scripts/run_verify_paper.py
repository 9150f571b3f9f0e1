"""Run the reproduction checks and write the text report.

    python3 scripts/run_verify_paper.py [report-path]
"""

import sys

from polyauto.reproduce import render, run_all


def main() -> int:
    items = run_all()
    text = render(items)
    print(text)
    if len(sys.argv) > 1:
        with open(sys.argv[1], "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    return 0 if all(i.passed for i in items) else 1


if __name__ == "__main__":
    sys.exit(main())
