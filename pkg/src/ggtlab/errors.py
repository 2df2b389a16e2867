"""Exception hierarchy shared across the package.

Three families, chosen so the CLI can map failures to exit codes without
inspecting individual classes: bad inputs (exit 2), exhausted search or
size budgets (exit 3), and failed internal checks (exit 1).
"""


class GgtError(Exception):
    exit_code = 1


class InputError(GgtError):
    """The caller handed us something malformed or out of contract."""

    exit_code = 2


class BudgetError(GgtError):
    """A configured cap (radius, node count, size guard) was exhausted."""

    exit_code = 3


class CheckFailure(GgtError):
    """An asserted invariant did not hold on the computed data."""

    exit_code = 1
