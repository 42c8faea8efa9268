"""Shared numerical constants.

Every comparison against reference matrices elsewhere in the package uses
these definitions, so they are defined once, in closed form.
"""
from math import atan, cos, gamma, pi, sin, sqrt
import cmath

# primitive roots of unity
ZETA7 = cmath.exp(2j * pi / 7)
RHO = cmath.exp(2j * pi / 3)
RHO2 = RHO * RHO

SQRT7 = sqrt(7.0)

# e = (-1 + i*sqrt(7))/2, the quadratic irrationality entering the Klein
# period matrix; equals zeta + zeta^2 + zeta^4 (a Gauss sum).
E_PERIOD = (-1 + 1j * SQRT7) / 2

# period-ratio constants: mu = zeta + 1/zeta = 2 cos(2 pi/7) satisfies
# mu^3 + mu^2 - 2 mu - 1 = 0; nu = 1 + mu satisfies nu^3 - 2 nu^2 - nu + 1 = 0
MU = 2 * cos(2 * pi / 7)
NU = 1 + MU

# |Z| where Z = Beta(4/7,1/7)/7 * (1/zeta - 1) is the smallest a-period entry
R3 = 2 * sin(pi / 7) * gamma(8 / 7) * gamma(4 / 7) / gamma(5 / 7)

# the closed form of that a-period itself
Z_VALUE = (gamma(4 / 7) * gamma(1 / 7) / gamma(5 / 7)) * (1 / ZETA7 - 1) / 7

# coefficients of the order-2 involution of the Klein quartic in (x,y)
# coordinates; they satisfy alpha*gamma = beta*(beta+1) and
# beta^2 = (alpha+1)*(gamma+1)
_THETA = (2 / 3) * atan(3 * sqrt(3))
ALPHA = (cos(_THETA) - sqrt(3) * sin(_THETA) - 1) / 3
BETA = (-2 * cos(_THETA) - 1) / 3
GAMMA = (cos(_THETA) + sqrt(3) * sin(_THETA) - 1) / 3

# constants available to every polynomial expression by name
NAMED_CONSTANTS = {
    "i": 1j,
    "j": 1j,
    "rho": RHO,
    "rho2": RHO2,
    "zeta": ZETA7,
}
