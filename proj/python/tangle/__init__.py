"""Mini-Pascal interpreter, self-referential specification classifier,
and decider refuter.

The heavy lifting lives in the compiled `_tangle` extension; this package
re-exports its surface.
"""

from ._tangle import (
    DEFAULT_FUEL,
    Table,
    classify,
    demo,
    eval_fn,
    parse,
    refute,
    run,
    synthesize,
    validate,
)

__all__ = [
    "DEFAULT_FUEL",
    "Table",
    "classify",
    "demo",
    "eval_fn",
    "parse",
    "refute",
    "run",
    "synthesize",
    "validate",
]
