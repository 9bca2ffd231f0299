from typing import Mapping, Sequence

from src.algebra.scalars import format_rational

WIDTH = 60


def print_header(text):
    print("\n" + "=" * WIDTH)
    print(f"{text:^{WIDTH}}")
    print("=" * WIDTH + "\n")


def print_section(text):
    print(f"\n{'─' * WIDTH}")
    print(f"  {text}")
    print('─' * WIDTH)


def print_success(text):
    print(f"✓ {text}")


def print_failure(text, detail=None):
    print(f"✗ {text}")
    if detail:
        print(f"    {detail}")


def format_matrix(matrix) -> str:
    rows = [[format_rational(value) for value in row] for row in matrix]
    width = max((len(entry) for row in rows for entry in row), default=1)
    return "\n".join("    [" + "  ".join(entry.rjust(width) for entry in row) + "]" for row in rows)


def print_table(rows: Sequence[Mapping[str, object]], columns: Sequence[str]):
    widths = {column: max([len(column)] + [len(str(row.get(column, ""))) for row in rows]) for column in columns}
    print("  ".join(column.upper().ljust(widths[column]) for column in columns))
    print("  ".join("─" * widths[column] for column in columns))
    for row in rows:
        print("  ".join(str(row.get(column, "")).ljust(widths[column]) for column in columns))
