"""Hypothesis strategies for two-level systems and resonances."""

import hypothesis.strategies as st

from ep_lab.spectral import TwoLevelSystem

unit = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False, allow_infinity=False)

systems = st.builds(
    TwoLevelSystem,
    e1=unit,
    e2=unit,
    g1=unit,
    g2=unit,
    omega=st.builds(complex, unit, unit),
)
"""Systems with every component in [-1, 1]."""

resonances = st.tuples(
    st.floats(min_value=-5, max_value=5, allow_nan=False),
    # subnormal widths underflow to a pole on the real axis when halved
    st.floats(min_value=-2, max_value=2, allow_nan=False).filter(lambda g: abs(g) > 1e-300),
)
