"""Almost-square witness laboratory: python surface over the C++ core.

Float-mode only. Vectors are lists of (index, value) pairs with 1-based
indices; c0-sum elements are lists of such lists, one per component.
Reports are dicts with the same field names the CLI emits.
"""

try:
    from ._asqlab import *  # installed layout: extension inside the package
    from ._asqlab import __doc__ as _core_doc  # noqa: F401
except ImportError:  # in-tree build: extension next to the build dir
    from _asqlab import *  # noqa: F401,F403
    from _asqlab import __doc__ as _core_doc  # noqa: F401

__all__ = [
    "Fkn",
    "Xn",
    "C0Sum",
    "lemma22",
    "remark23",
    "lemma33_pair",
    "lemma34",
    "thm35",
    "transfer",
    "counterexample",
    "refute_unit_h",
    "refute_sweep",
    "mvee",
    "john_check",
    "prop21",
    "prop21_sweep",
    "lasq_modulus",
    "asq_modulus",
    "random_unit",
]
