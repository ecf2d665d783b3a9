"""Built-in vector sets and the reference tables the package reproduces.

Two 5 x 10 test matrices are embedded: ``x_plus`` with unit-norm columns
(printed to four decimals, so columns are renormalized to exact unit norm on
load; the raw printed values stay available as ``X_PLUS_PRINTED``) and
``x_minus`` with arbitrary norms.  The reference tables are simulation
results for these sets at desk scale (m = n = 5, l = 10): both derivative
routes, the curve reconstructed from each route, the direct estimate, and
where applicable the large-beta limit column and the lifted/adjusted value
pairs.  Each table carries its per-column comparison tolerances, sized so
that an independent run at the stated sample count passes with margin while
a formula error of one term does not.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .model import Variant, VectorSet, build_set

X_PLUS_PRINTED = np.array([
    [-0.7998, 0.1004, -0.7599, 0.6616, 0.5864, -0.4010, -0.0148, -0.8320, 0.3187, -0.4861],
    [0.1760, 0.0704, 0.1056, -0.1369, -0.6259, -0.5289, -0.3740, 0.3140, 0.6299, -0.5494],
    [0.0806, -0.9085, -0.3381, -0.1970, -0.1438, 0.4863, 0.5832, 0.0840, -0.2299, -0.2647],
    [0.5487, -0.3120, -0.5447, 0.5673, 0.4870, -0.5239, 0.0407, -0.2955, 0.3913, 0.5113],
    [-0.1476, 0.2497, -0.0208, 0.4276, 0.0808, -0.2202, -0.7198, 0.3389, 0.5438, -0.3611],
])

X_MINUS_PRINTED = np.array([
    [-0.3624, -0.9364, 1.1566, -0.8076, -1.1066, 1.3148, -0.3405, -0.7938, -3.0744, 0.2493],
    [-0.6616, -1.4250, -1.4638, -0.1997, 0.1102, 0.9261, 1.2240, -0.1874, -0.4569, -0.1518],
    [-0.4980, -0.0708, -0.7947, -1.3493, 0.3226, -0.4982, 1.0334, -0.2817, 0.3247, -2.4773],
    [-1.4281, -0.7722, 0.9885, -0.4056, -0.2903, -0.1814, 1.4318, 1.0533, 1.3286, -0.6086],
    [-0.7196, 1.3075, 1.0363, -0.9904, 0.4357, -1.6953, 0.2346, -0.5735, -1.0376, 0.1766],
])

FIXTURE_NAMES = ("x_plus", "x_minus")


def fixture(name: str) -> VectorSet:
    """A built-in vector set by name; x_plus is renormalized to unit columns."""
    if name == "x_plus":
        cols = X_PLUS_PRINTED / np.linalg.norm(X_PLUS_PRINTED, axis=0)
        return build_set(cols)
    if name == "x_minus":
        return build_set(X_MINUS_PRINTED)
    raise ValidationError(f"unknown fixture {name!r}; known: {FIXTURE_NAMES}")


@dataclass(frozen=True)
class ReferenceTable:
    """One reference table: configuration, expected cells, tolerances."""

    table_id: str
    set_name: str
    variant: Variant
    beta: float
    s: int
    c3: float | None
    c3s: float | None  # exponent scale of the limit column, lifted tables only
    samples: int
    ts: np.ndarray
    columns: dict       # column name -> expected values per row
    tolerances: dict    # column name -> absolute tolerance

    @property
    def has_lim(self) -> bool:
        return "lim" in self.columns


_ROW_TS = np.round(np.arange(1, 10) * 0.1, 10)

# Plain tables: dpsi_standard, dpsi_computed, psi_int_standard,
# psi_int_computed, psi_direct (+ lim for the large-beta pair).
_T1 = """
-0.0411 -0.0331 1.6762 1.6763 1.6787
-0.0651 -0.0635 1.6711 1.6712 1.6733
-0.0932 -0.0937 1.6630 1.6631 1.6640
-0.1251 -0.1258 1.6516 1.6518 1.6551
-0.1610 -0.1613 1.6371 1.6371 1.6395
-0.2041 -0.2005 1.6186 1.6187 1.6232
-0.2541 -0.2528 1.5954 1.5956 1.5986
-0.3185 -0.3219 1.5661 1.5665 1.5711
-0.4287 -0.4277 1.5279 1.5285 1.5336
"""

_T2 = """
-0.0363 -0.0344 -0.2266 -0.2267 -0.2224
-0.0655 -0.0680 -0.2320 -0.2321 -0.2320
-0.0998 -0.1010 -0.2408 -0.2409 -0.2391
-0.1333 -0.1377 -0.2530 -0.2532 -0.2525
-0.1737 -0.1751 -0.2690 -0.2692 -0.2676
-0.2208 -0.2189 -0.2892 -0.2893 -0.2854
-0.2768 -0.2716 -0.3142 -0.3143 -0.3106
-0.3431 -0.3348 -0.3452 -0.3452 -0.3399
-0.4270 -0.4283 -0.3839 -0.3840 -0.3798
"""

_T3 = """
-0.0334 -0.0332 1.5942 1.5940 1.5951 1.5866
-0.0616 -0.0648 1.5891 1.5888 1.5904 1.5819
-0.0953 -0.0960 1.5808 1.5805 1.5814 1.5729
-0.1293 -0.1296 1.5693 1.5688 1.5727 1.5642
-0.1666 -0.1692 1.5540 1.5536 1.5565 1.5481
-0.2115 -0.2144 1.5345 1.5341 1.5356 1.5271
-0.2733 -0.2716 1.5097 1.5093 1.5144 1.5058
-0.3604 -0.3558 1.4775 1.4774 1.4820 1.4732
-0.5081 -0.5016 1.4335 1.4336 1.4388 1.4296
"""

_T4 = """
-0.0398 -0.0349 -0.3040 -0.3038 -0.3080 -0.3167
-0.0670 -0.0693 -0.3094 -0.3093 -0.3122 -0.3209
-0.1047 -0.1059 -0.3185 -0.3184 -0.3195 -0.3280
-0.1411 -0.1444 -0.3313 -0.3312 -0.3320 -0.3405
-0.1866 -0.1848 -0.3481 -0.3481 -0.3500 -0.3585
-0.2382 -0.2366 -0.3698 -0.3697 -0.3695 -0.3780
-0.2995 -0.2996 -0.3969 -0.3969 -0.3978 -0.4066
-0.3780 -0.3806 -0.4314 -0.4314 -0.4292 -0.4381
-0.5042 -0.5164 -0.4767 -0.4770 -0.4762 -0.4858
"""

_T5 = """
-0.0868 -0.0877 4.2365 4.2376 4.2299
-0.1643 -0.1662 4.2229 4.2241 4.2189
-0.2493 -0.2342 4.2012 4.2032 4.2180
-0.3099 -0.3181 4.1721 4.1746 4.1691
-0.3966 -0.3936 4.1357 4.1382 4.1502
-0.4833 -0.4948 4.0903 4.0926 4.0912
-0.6006 -0.5995 4.0343 4.0372 4.0402
-0.7336 -0.7447 3.9664 3.9691 3.9636
-0.9417 -0.9298 3.8811 3.8846 3.8858
"""

_T6 = """
-0.0672 -0.0643 -0.5143 -0.5130 -0.5128
-0.1284 -0.1278 -0.5252 -0.5234 -0.5245
-0.1919 -0.1926 -0.5414 -0.5401 -0.5413
-0.2546 -0.2550 -0.5641 -0.5630 -0.5630
-0.3169 -0.3186 -0.5934 -0.5923 -0.5929
-0.3850 -0.3855 -0.6291 -0.6281 -0.6342
-0.4623 -0.4621 -0.6721 -0.6713 -0.6671
-0.5355 -0.5447 -0.7232 -0.7223 -0.7214
-0.6412 -0.6439 -0.7829 -0.7827 -0.7809
"""

# Lifted tables: dpsi_standard, dpsi_computed, then value/adjusted pairs for
# the two integrated columns and the direct one (+ lim pair when present).
_T7 = """
-0.0549 -0.0525 3.1908 1.6626 3.1918 1.6630 3.1846 1.6597
-0.1054 -0.1022 3.1827 1.6588 3.1836 1.6592 3.1832 1.6590
-0.1523 -0.1541 3.1693 1.6525 3.1703 1.6529 3.1674 1.6516
-0.1999 -0.2093 3.1506 1.6436 3.1516 1.6441 3.1546 1.6455
-0.2761 -0.2712 3.1256 1.6318 3.1270 1.6325 3.1279 1.6329
-0.3448 -0.3408 3.0944 1.6168 3.0956 1.6174 3.1024 1.6207
-0.4328 -0.4311 3.0551 1.5978 3.0560 1.5982 3.0555 1.5980
-0.5582 -0.5535 3.0051 1.5731 3.0057 1.5735 3.0138 1.5775
-0.7420 -0.7393 2.9392 1.5401 2.9401 1.5405 2.9482 1.5447
"""

_T8 = """
-0.0273 -0.0190 0.8898 -0.2411 0.8902 -0.2405 0.8875 -0.2450
-0.0378 -0.0367 0.8868 -0.2462 0.8872 -0.2455 0.8878 -0.2445
-0.0563 -0.0541 0.8821 -0.2541 0.8825 -0.2534 0.8834 -0.2519
-0.0693 -0.0715 0.8757 -0.2649 0.8761 -0.2642 0.8788 -0.2596
-0.0900 -0.0899 0.8675 -0.2790 0.8679 -0.2783 0.8700 -0.2747
-0.1095 -0.1105 0.8573 -0.2966 0.8577 -0.2959 0.8572 -0.2968
-0.1347 -0.1337 0.8448 -0.3185 0.8453 -0.3175 0.8467 -0.3152
-0.1680 -0.1637 0.8295 -0.3457 0.8302 -0.3445 0.8308 -0.3434
-0.2064 -0.2066 0.8107 -0.3800 0.8114 -0.3786 0.8146 -0.3727
"""

_T9 = """
-0.0479 -0.0518 3.0304 1.5857 3.0304 1.5857 3.0204 1.5808 3.0047 1.5730
-0.1145 -0.0993 3.0224 1.5817 3.0223 1.5817 3.0251 1.5831 3.0093 1.5753
-0.1411 -0.1547 3.0095 1.5754 3.0091 1.5751 3.0177 1.5794 3.0019 1.5716
-0.2146 -0.2079 2.9906 1.5660 2.9905 1.5659 2.9962 1.5687 2.9808 1.5611
-0.2839 -0.2748 2.9658 1.5535 2.9658 1.5535 2.9644 1.5528 2.9491 1.5451
-0.3462 -0.3522 2.9339 1.5374 2.9335 1.5372 2.9345 1.5377 2.9192 1.5299
-0.4512 -0.4511 2.8926 1.5163 2.8924 1.5162 2.8976 1.5188 2.8824 1.5110
-0.5984 -0.5980 2.8395 1.4886 2.8387 1.4882 2.8475 1.4928 2.8320 1.4847
-0.8504 -0.8428 2.7661 1.4496 2.7654 1.4492 2.7775 1.4557 2.7615 1.4472
"""

_T10 = """
-0.0575 -0.0480 0.7528 -0.3506 0.7523 -0.3509 0.7627 -0.3448 0.7524 -0.3508
-0.0746 -0.0866 0.7457 -0.3548 0.7453 -0.3551 0.7551 -0.3492 0.7449 -0.3553
-0.1312 -0.1244 0.7353 -0.3611 0.7344 -0.3616 0.7416 -0.3573 0.7315 -0.3634
-0.1393 -0.1596 0.7216 -0.3695 0.7200 -0.3705 0.7270 -0.3662 0.7171 -0.3723
-0.1963 -0.2010 0.7032 -0.3810 0.7016 -0.3821 0.7092 -0.3773 0.6991 -0.3837
-0.2478 -0.2464 0.6808 -0.3956 0.6789 -0.3968 0.6867 -0.3917 0.6767 -0.3982
-0.2937 -0.3015 0.6535 -0.4139 0.6511 -0.4155 0.6649 -0.4061 0.6549 -0.4129
-0.3713 -0.3731 0.6192 -0.4380 0.6170 -0.4396 0.6316 -0.4291 0.6215 -0.4363
-0.4972 -0.4954 0.5751 -0.4710 0.5728 -0.4728 0.5894 -0.4600 0.5789 -0.4680
"""

_PLAIN_COLS = ("dpsi_standard", "dpsi_computed", "psi_int_standard", "psi_int_computed", "psi_direct")
_LIFT_COLS = (
    "dpsi_standard", "dpsi_computed",
    "psi_int_standard", "psi_int_standard_adj",
    "psi_int_computed", "psi_int_computed_adj",
    "psi_direct", "psi_direct_adj",
)


def _parse(block: str, names: tuple) -> dict:
    data = np.array([[float(v) for v in line.split()] for line in block.strip().splitlines()])
    assert data.shape == (9, len(names))
    return {name: data[:, k].copy() for k, name in enumerate(names)}


def _tols(names, *, psi: float, deriv: float, adj: float | None = None) -> dict:
    out = {}
    for name in names:
        if name.startswith("dpsi"):
            out[name] = deriv
        elif name.endswith("_adj"):
            out[name] = adj
        else:
            out[name] = psi
    return out


def _table(table_id, block, names, set_name, variant, beta, s, samples,
           c3=None, c3s=None, **tol_kw) -> ReferenceTable:
    return ReferenceTable(
        table_id=table_id,
        set_name=set_name,
        variant=variant,
        beta=beta,
        s=s,
        c3=c3,
        c3s=c3s,
        samples=samples,
        ts=_ROW_TS.copy(),
        columns=_parse(block, names),
        tolerances=_tols(names, **tol_kw),
    )


_TABLES = {
    "table1": _table("table1", _T1, _PLAIN_COLS, "x_plus", Variant.SPHERICAL,
                     3.0, 1, 30000, psi=0.02, deriv=0.05),
    "table2": _table("table2", _T2, _PLAIN_COLS, "x_plus", Variant.SPHERICAL,
                     3.0, -1, 30000, psi=0.02, deriv=0.05),
    "table3": _table("table3", _T3, _PLAIN_COLS + ("lim",), "x_plus", Variant.SPHERICAL,
                     10.0, 1, 30000, psi=0.02, deriv=0.06),
    "table4": _table("table4", _T4, _PLAIN_COLS + ("lim",), "x_plus", Variant.SPHERICAL,
                     10.0, -1, 30000, psi=0.02, deriv=0.06),
    "table5": _table("table5", _T5, _PLAIN_COLS, "x_minus", Variant.GENERAL,
                     3.0, 1, 50000, psi=0.03, deriv=0.06),
    "table6": _table("table6", _T6, _PLAIN_COLS, "x_minus", Variant.GENERAL,
                     3.0, -1, 50000, psi=0.03, deriv=0.06),
    "table7": _table("table7", _T7, _LIFT_COLS, "x_plus", Variant.LIFTED,
                     3.0, 1, 50000, c3=0.1, psi=0.03, deriv=0.06, adj=0.02),
    "table8": _table("table8", _T8, _LIFT_COLS, "x_plus", Variant.LIFTED,
                     3.0, -1, 50000, c3=0.1, psi=0.03, deriv=0.06, adj=0.02),
    "table9": _table("table9", _T9, _LIFT_COLS + ("lim", "lim_adj"), "x_plus", Variant.LIFTED,
                     10.0, 1, 50000, c3=0.03, c3s=0.3, psi=0.03, deriv=0.06, adj=0.02),
    "table10": _table("table10", _T10, _LIFT_COLS + ("lim", "lim_adj"), "x_plus", Variant.LIFTED,
                      10.0, -1, 50000, c3=0.1, c3s=1.0, psi=0.03, deriv=0.06, adj=0.02),
}


def table_ids() -> tuple:
    return tuple(_TABLES)


def reference(table_id: str) -> ReferenceTable:
    """The encoded expected values and tolerances for one table."""
    try:
        return _TABLES[table_id]
    except KeyError:
        raise ValidationError(
            f"unknown table id {table_id!r}; known: {', '.join(_TABLES)}"
        ) from None
