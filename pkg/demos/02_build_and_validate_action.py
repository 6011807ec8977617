"""Building an equivariant action from a sparse seed, and what gets rejected.

A seed is a finite list of taps (read one coefficient, add it somewhere
else).  The seed automorphism is g = id + N; conjugating by powers of t
gives the whole family g_k = t^k g t^{-k}.  Construction only succeeds
when N^p = 0 and all conjugate levels commute — both are certified, not
assumed.  Run with

    python3 demos/02_build_and_validate_action.py
"""

import random

from equifix.action import ActionSpec, apply_phi, build_action, equivariance_check
from equifix.errors import NonCommuting, NotOrderP
from equifix.laurent import (
    SeriesVector,
    format_vector,
    parse_series,
    random_series,
    random_vector,
)
from equifix.taps import SparsePerturbation, TapEntry


def try_build(label, p, d, taps):
    seed = SparsePerturbation(p, d, [TapEntry(*t) for t in taps])
    try:
        action = build_action(ActionSpec(p=p, d=d, seed=seed, label=label))
    except (NotOrderP, NonCommuting) as exc:
        print(f"  {label}: rejected ({type(exc).__name__}: {exc})")
        return None
    certs = action.certificates()
    print(f"  {label}: ok, N^{p} vanished at power {certs['nilpotency']['vanished_at_power']},"
          f" commutation span {certs['commutation']['span']}")
    return action


print("three candidate seeds at p = 2")
tap = try_build("tap  (1,0)->(2,0)", 2, 2, [(1, 0, 2, 0, 1)])
try_build("swap (1,0)<->(2,0)", 2, 2, [(1, 0, 2, 0, 1), (2, 0, 1, 0, 1)])
try_build("cross-level chain", 2, 3, [(1, 0, 2, 1, 1), (2, 0, 3, 0, 1)])

print("\nhow the accepted action moves a vector (phi(x) applied to u)")
u = SeriesVector([parse_series("1 + t", 2, 6), parse_series("t^2", 2, 6)])
print(f"  u                 = {format_vector(u)}")
for text in ("0", "1", "t", "1 + t"):
    x = parse_series(text, 2, 8)
    out = apply_phi(tap, x, u, out_prec=6)
    print(f"  phi({text:<5})(u)     = {format_vector(out)}")

print("\nthe defining identity, spot-checked on random samples")
rng = random.Random(11)
samples = [
    (random_series(rng, 2, prec=8, min_val=-2), random_vector(rng, 2, 2, prec=8, min_val=-2))
    for _ in range(40)
]
report = equivariance_check(tap, samples)
print(f"  phi(t*x)(u) == t * phi(x)(u/t) on {len(samples)} samples: {report.ok}")

print("\ncontraction bookkeeping: writes of g_k land at exponent >= mu(k)")
for k in range(-2, 3):
    print(f"  mu({k:2}) = {tap.modulus.mu(k)}")
print(f"  so generators with k >= {tap.modulus.threshold(4)} are invisible below t^4")
print("done")
