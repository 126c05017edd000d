"""Reference curves used by the test suite and accepted by name on the command line.

Coefficients are lowest degree first.
"""

# -(x^2+1)(x^2+4): branch points +-i, +-2i
GENUS1 = "-4,0,-5,0,-1"
# -(x^2+1)(x^2+4)(x^2+9)
GENUS2 = "-36,0,-49,0,-14,0,-1"
# -(x^2+1)(x^2-2x+2)(x^2+2x+5)(x^2+9): no mirror symmetry in the imaginary axis
GENUS3 = "-90,54,-127,60,-49,6,-13,0,-1"

SHIPPED = {"g1": GENUS1, "g2": GENUS2, "g3": GENUS3}
