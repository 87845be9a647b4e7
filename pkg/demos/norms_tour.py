"""A tour of the four norms: Q, Q/Z, p-adic and weight-induced."""

from fractions import Fraction

from coarsedim import InducedNorm, PNorm, QNorm, QuotientNorm, ball_enumerate, dyadic_weights
from coarsedim.exact import LogLinearValue

q = Fraction(3, 4)

# ||m/n||_Q = |m/n| + ln n, kept symbolic
print("||3/4||_Q    =", QNorm()(q), "~", float(QNorm()(q)))
print("||2/3||_Q/Z  =", QuotientNorm()(Fraction(2, 3)))
print("||3/4||_2    =", PNorm(2)(q))

# comparisons are exact, even when the floats agree to many digits
a = LogLinearValue(Fraction(1, 10**20), 2)
print("1e-20 + ln 2 > ln 2 :", a > LogLinearValue(0, 2))

# w(±2^-k) = 2^k on Z[1/2]
N = InducedNorm(dyadic_weights(2, 2))
for x in [Fraction(1, 2), Fraction(3, 4), Fraction(5, 8), Fraction(7, 2)]:
    print(f"||{x}||_w = {N(x)}")

# balls are finite for proper norms
for R in range(1, 5):
    print("R =", R, " |B_Q(R)| =", len(ball_enumerate(QNorm(), R)), " |B_w(R)| =", len(N.ball(R)))

try:
    ball_enumerate(PNorm(2), 1)
except Exception as exc:
    print(type(exc).__name__, "->", exc)
