"""Hand-checked classifier cases shared by the unit and acceptance suites.

Each row: (label, params kwargs, expected outcome, expected condition tag,
expected u-power or None, expected v-power or None, expected v log-power).
Every inequality was verified by direct substitution; boundary rows land
exactly on an equality and must come back INCONCLUSIVE.
"""

from gmext import Outcome, SystemKind

GM = SystemKind.GM
MIXED = SystemKind.MIXED
NEG_A = SystemKind.NEG_ACTIVATOR
NEG_B = SystemKind.NEG_BOTH

NONEX = Outcome.NONEXISTENCE
MIN = Outcome.EXISTS_MINIMAL_GROWTH
FAST = Outcome.EXISTS_FAST_GROWTH
MIX = Outcome.EXISTS_MIXED_MINIMAL
INC = Outcome.INCONCLUSIVE


def P(N, p, q, m, s, k, lam=0.0, kind=GM):
    return dict(N=N, p=p, q=q, m=m, s=s, k=k, lam=lam, kind=kind)


# fmt: off
CLASSIFIER_TABLE = [
    # --- minimal growth, N = 3 ---
    ("min-i basic",          P(3, 5, 1, 6, 1, 4),        MIN,  "Thm2.2(i)",   -1.0, -1.0, 0.0),
    ("min-i log inhibitor",  P(3, 5, 1, 4, 1, 4),        MIN,  "Thm2.2(i)",   -1.0, -1.0, 0.5),
    ("min-iii basic",        P(3, 6, 2, 3, 1, 4),        MIN,  "Thm2.2(iii)", -1.0, -0.5, 0.0),
    ("min-iii from k=3.5",   P(3, 4, 1.5, 3, 1, 3.5),    MIN,  "Thm2.2(iii)", -1.0, -0.5, 0.0),
    ("min-iii near bound",   P(3, 5, 1, 3.9, 1, 4),      MIN,  "Thm2.2(iii)", -1.0, -0.95, 0.0),
    ("min-i small sigma",    P(3, 12, 1, 6, 1, 4),       MIN,  "Thm2.2(i)",   -1.0, -1.0, 0.0),
    ("min-i lam irrelevant", P(3, 5, 1, 6, 1, 4, 0.5),   MIN,  "Thm2.2(i)",   -1.0, -1.0, 0.0),
    # boundary equalities -> inconclusive
    ("p at iii bound",       P(3, 3.75, 1.5, 3, 1, 4),   INC,  "Thm2.2(gap)", None, None, 0.0),
    ("double eq, q small",   P(3, 4, 1, 4, 1, 4),        INC,  "Thm2.2(gap)", None, None, 0.0),
    ("p=q+c, m above",       P(3, 4, 1, 4.2, 1, 4),      INC,  "Thm2.2(gap)", None, None, 0.0),
    ("p=q+c exact",          P(3, 3.5, 0.5, 6, 1, 4),    INC,  "Thm2.2(gap)", None, None, 0.0),
    # nonexistence, N >= 3
    ("small p",              P(3, 2, 1, 6, 1, 4),        NONEX, "Thm2.1(iii)", None, None, 0.0),
    ("p at critical",        P(3, 3, 1, 6, 1, 4),        NONEX, "Thm2.1(iii)", None, None, 0.0),
    ("m at critical",        P(3, 5, 1, 2, 1, 4),        NONEX, "Thm2.1(ii)",  None, None, 0.0),
    ("m below critical",     P(3, 5, 1, 1.99, 1, 4),     NONEX, "Thm2.1(ii)",  None, None, 0.0),
    ("planar",               P(2, 5, 1, 6, 1, 4),        NONEX, "Thm2.1(i)",   None, None, 0.0),
    # k gates
    ("k equals N",           P(3, 5, 1, 6, 1, 3),        INC,  "k=N",         None, None, 0.0),
    ("k too small",          P(3, 5, 1, 6, 1, 1.5),      INC,  "k<=2",        None, None, 0.0),
    ("k exactly 2",          P(3, 5, 1, 6, 1, 2),        INC,  "k<=2",        None, None, 0.0),
    # sigma gate
    ("sigma 2 minimal",      P(3, 4, 2, 6, 1, 4),        INC,  "sigma>=1",    None, None, 0.0),
    ("sigma 2 fast",         P(3, 4, 2, 6, 1, 2.5),      INC,  "sigma>=1",    None, None, 0.0),
    ("sigma just above 1",   P(3, 5, 2, 5, 1, 4),        INC,  "sigma>=1",    None, None, 0.0),
    # fast growth, N = 3, a = 0.5
    ("fast-ii basic",        P(3, 6, 0.5, 6, 1, 2.5),    FAST, "Thm2.3(ii)",  -0.5, -0.5, 0.0),
    ("fast-i log inhibitor", P(3, 6, 0.5, 8, 1, 2.5),    FAST, "Thm2.3(i)",   -0.5, -1.0, 0.5),
    ("fast-i basic",         P(3, 6, 0.5, 9, 1, 2.5),    FAST, "Thm2.3(i)",   -0.5, -1.0, 0.0),
    ("fast p below bound",   P(3, 5, 1, 6, 1, 2.5),      INC,  "Thm2.3(gap)", None, None, 0.0),
    ("fast m at 2/a",        P(3, 6, 0.5, 4, 1, 2.5),    INC,  "Thm2.3(gap)", None, None, 0.0),
    # other dimensions
    ("N4 min-i",             P(4, 3, 0.5, 4, 1, 5),      MIN,  "Thm2.2(i)",   -2.0, -2.0, 0.0),
    ("N4 p critical",        P(4, 2, 1, 3, 1, 5),        NONEX, "Thm2.1(iii)", None, None, 0.0),
    ("N4 m critical",        P(4, 3, 1, 1, 1, 5),        NONEX, "Thm2.1(ii)",  None, None, 0.0),
    ("N4 min-iii",           P(4, 3, 1, 1.2, 0.1, 5),    MIN,  "Thm2.2(iii)", -2.0, -0.4 / 1.1, 0.0),
    ("N4 fast-ii",           P(4, 5, 1, 3, 1, 3),        FAST, "Thm2.3(ii)",  -1.0, -0.5, 0.0),
    ("N4 fast gap",          P(4, 3, 1, 3, 1, 3),        INC,  "Thm2.3(gap)", None, None, 0.0),
    ("N5 fast-i",            P(5, 4.5, 1, 6, 1, 3.5),    FAST, "Thm2.3(i)",   -1.5, -3.0, 0.0),
    ("N5 fast-i small sig",  P(5, 4, 0.5, 6, 1, 3.5),    FAST, "Thm2.3(i)",   -1.5, -3.0, 0.0),
    ("N5 fast-ii",           P(5, 4, 1, 4, 1, 3.5),      FAST, "Thm2.3(ii)",  -1.5, -2.0, 0.0),
    ("N6 min-iii",           P(6, 2, 0.4, 2, 1, 7),      MIN,  "Thm2.2(iii)", -4.0, -3.0, 0.0),
    # sign-flipped kinds
    ("neg activator",        P(3, 2, 1, 3, 1, 4, kind=NEG_A),   NONEX, "Thm7.1(i)",   None, None, 0.0),
    ("neg both",             P(4, 0.5, 2, 1, 0.5, 3, kind=NEG_B), NONEX, "Thm7.1(i)", None, None, 0.0),
    ("neg planar",           P(2, 3, 1, 2, 0.5, 4, kind=NEG_A), NONEX, "Thm7.1(i)",   None, None, 0.0),
    # mixed kind
    ("mixed planar",         P(2, 1, 4, 5, 1, 4, kind=MIXED),   NONEX, "Thm7.1(ii1)", None, None, 0.0),
    ("mixed small q",        P(3, 1, 1.5, 5, 1, 4, kind=MIXED), NONEX, "Thm7.1(ii2)", None, None, 0.0),
    ("mixed small m",        P(3, 1, 5, 1.5, 1, 4, kind=MIXED), NONEX, "Thm7.1(ii2)", None, None, 0.0),
    ("mixed exists",         P(3, 1, 4.5, 5, 1, 4, kind=MIXED), MIX,  "Thm7.2",      -1.0, -1.0, 0.0),
    ("mixed q boundary",     P(3, 1, 4, 5, 1, 4, kind=MIXED),   INC,  "Thm7.2(boundary)", None, None, 0.0),
    ("mixed m boundary",     P(3, 1, 4.5, 4, 1, 4, kind=MIXED), INC,  "Thm7.2(boundary)", None, None, 0.0),
    ("mixed k boundary",     P(3, 1, 4.5, 5, 1, 3, kind=MIXED), INC,  "Thm7.2(boundary)", None, None, 0.0),
    ("mixed q too small",    P(3, 2.5, 4.8, 5, 1, 4, kind=MIXED), INC, "Thm7.2(gap)", None, None, 0.0),
]
# fmt: on


# Coupled-solve instances used by both solver tests and the acceptance gate:
# (params kwargs, grid (r0, R, n), fit window, expected u/v powers)
COUPLED_MIN_I = dict(params=P(3, 5, 1, 6, 1, 4), grid=(1.0, 1e4, 4097),
                     window=(10.0, 1e3), u_power=-1.0, v_power=-1.0)
COUPLED_MIN_III = dict(params=P(3, 6, 2, 3, 1, 4), grid=(1.0, 1e4, 4097),
                       window=(10.0, 1e3), u_power=-1.0, v_power=-0.5)
COUPLED_FROM_K35 = dict(params=P(3, 4, 1.5, 3, 1, 3.5), grid=(1.0, 1e5, 5121),
                        window=(100.0, 1e4), u_power=-1.0, v_power=-0.5)
COUPLED_FAST_N5 = dict(params=P(5, 4, 0.5, 6, 1, 3.5), grid=(1.0, 1e4, 4097),
                       window=(10.0, 1e3), u_power=-1.5, v_power=-3.0)
COUPLED_MIXED = dict(params=P(3, 1, 4.5, 5, 1, 4, kind=MIXED), grid=(1.0, 1e4, 4097),
                     window=(10.0, 1e3), u_power=-1.0, v_power=-1.0)
