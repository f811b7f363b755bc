import sys
from pathlib import Path

from hypothesis import settings, strategies as st

from defectkit.fpab import make_group
from defectkit.zlinalg import IntMatrix

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


@st.composite
def matrices(draw, max_rows=5, max_cols=5, bound=20, min_rows=1, min_cols=1):
    r = draw(st.integers(min_rows, max_rows))
    c = draw(st.integers(min_cols, max_cols))
    entries = draw(st.lists(st.integers(-bound, bound), min_size=r * c, max_size=r * c))
    return IntMatrix(r, c, entries)


@st.composite
def groups(draw, max_gens=3, bound=6, finite=False):
    n = draw(st.integers(1, max_gens))
    if finite:
        diag = draw(st.lists(st.integers(1, bound), min_size=n, max_size=n))
        extra = draw(st.lists(st.integers(-bound, bound), min_size=n * n, max_size=n * n))
        # upper triangular with nonzero diagonal keeps the group finite
        cols = [[(diag[j] if i == j else extra[i * n + j] if i < j else 0) for i in range(n)] for j in range(n)]
        return make_group(IntMatrix.from_columns(cols, n), n)
    k = draw(st.integers(0, n + 1))
    entries = draw(st.lists(st.integers(-bound, bound), min_size=n * k, max_size=n * k))
    return make_group(IntMatrix(n, k, entries), n)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
