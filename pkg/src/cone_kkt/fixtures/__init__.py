"""Reference problem instances shipped with the package.

p0 "slack"  — strictly slack optimum at the origin, zero multiplier.
p1 "box"    — one binding coordinate, unique multiplier.
p2 "ray"    — ordering cone with empty interior; multiplier is non-unique.

Each instance exists both as a JSON file (the CLI test corpus) and as a
loader here; the JSON files are the single source of truth.
"""

from importlib import resources


def path(name: str) -> str:
    """Absolute path of a shipped fixture file, e.g. path('p1')."""
    res = resources.files(__package__).joinpath(f"{name}.json")
    if not res.is_file():
        raise FileNotFoundError(f"no shipped fixture named {name!r}")
    return str(res)


def load(name: str):
    """Load and validate a shipped fixture as a ProblemSpec."""
    from ..fileio import load_problem

    return load_problem(path(name))


def p0():
    return load("p0")


def p1():
    return load("p1")


def p2():
    return load("p2")
