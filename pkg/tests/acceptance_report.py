"""Collects one PASS/FAIL line per acceptance criterion for the terminal summary."""

LINES: list[str] = []


def record(criterion: str, ok: bool, detail: str) -> bool:
    LINES.append(f"{'PASS' if ok else 'FAIL'}  [{criterion}] {detail}")
    print(LINES[-1])
    return ok
