import math

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from odesurface.expr import Binary, Const, Region, Unary, Var, parse

settings.register_profile("suite", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")

LAMBERT_PHI = "(lambert_w(exp(-u-1)) + 1)/(1 - x)"
SPHERE_PHI = "-1+sqrt(1-(x+u)^2)"
HYPERBOLIC_PHI = "-1+sqrt(1+(x+u)^2)"
EX48_EPS = "ln((1/u^2)*sin(1/u))"
HYP_PHI = "(1-3*x*u)/x^2"
HYP_EPS = "x+3*ln(x)"

# (id, phi, epsilon, region, expected curvature or None)
MATRIX = [
    ("square", "u^2", "0", (-1, 1, 1, 2), None),
    ("rational", HYP_PHI, "0", (1, 2, -1, 1), None),
    ("lambert", LAMBERT_PHI, "0", (2, 3, -1, 1), 0.0),
    ("sphere", SPHERE_PHI, "0", (-0.3, 0.3, -0.3, 0.3), 1.0),
    ("pseudosphere", HYPERBOLIC_PHI, "0", (-0.3, 0.3, -0.3, 0.3), -1.0),
    ("square_deformed", "u^2", EX48_EPS, (0, 1, 0.2, 0.3), 1.0),
    ("rational_deformed", HYP_PHI, HYP_EPS, (1, 2, -1, 1), -1.0),
]


@pytest.fixture(params=MATRIX, ids=[m[0] for m in MATRIX])
def pair(request):
    name, phi, eps, region, k = request.param
    return {"name": name, "phi": parse(phi), "eps": parse(eps), "region": Region(*region), "k": k}


def random_points(region: Region, n: int, seed: int = 7):
    rng = np.random.default_rng(seed)
    return (rng.uniform(region.x_min, region.x_max, n), rng.uniform(region.u_min, region.u_max, n))


# Expression generator: smooth enough that finite differences are meaningful on
# the sampled box, with domain-restricted functions fed guarded arguments.
_leaf = st.one_of(
    st.just(Var("x")),
    st.just(Var("u")),
    st.sampled_from([0.5, 1.0, 2.0, 3.0, -1.5]).map(Const),
)


def _extend(children):
    positive = children.map(lambda c: Binary("add", Const(1.5), Binary("pow", c, Const(2))))
    return st.one_of(
        st.tuples(st.sampled_from(["add", "sub", "mul"]), children, children).map(lambda t: Binary(*t)),
        st.tuples(children, positive).map(lambda t: Binary("div", *t)),
        st.tuples(children, st.sampled_from([2.0, 3.0])).map(lambda t: Binary("pow", t[0], Const(t[1]))),
        st.tuples(st.sampled_from(["sin", "cos", "neg", "tanh"]), children).map(lambda t: Unary(*t)),
        children.map(lambda c: Unary("exp", Unary("sin", c))),
        positive.map(lambda c: Unary("ln", c)),
        positive.map(lambda c: Unary("sqrt", c)),
        children.map(lambda c: Unary("lambert_w", Binary("pow", c, Const(2)))),
    )


expressions = st.recursive(_leaf, _extend, max_leaves=8)

BOX = Region(-1.2, 1.3, -1.1, 1.4)


def close(a: float, b: float, tol: float) -> bool:
    return math.isfinite(a) and math.isfinite(b) and abs(a - b) <= tol * (1.0 + abs(b))
