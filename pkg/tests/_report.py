"""Shared sink for acceptance-criterion pass/fail lines.

The conftest terminal-summary hook replays these at the end of the run so
each criterion gets one visible line regardless of output capturing.
"""

LINES: list[str] = []


def record(line: str) -> None:
    LINES.append(line)
    print(line)
