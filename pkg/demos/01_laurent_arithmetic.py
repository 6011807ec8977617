"""Tour of truncated Laurent series over F_p.

Every value is exact: coefficients live in F_p and each series carries
the exponent where knowledge stops (the O(t^n) tail).  Run with

    python3 demos/01_laurent_arithmetic.py
"""

from equifix.laurent import (
    LatticeWindow,
    SeriesVector,
    coords_to_vector,
    format_series,
    format_vector,
    parse_series,
    window_coords,
)


def show(label, value):
    print(f"  {label:<34} {value}")


print("parsing (p = 3, default precision 4)")
a = parse_series("t^-1 + 2*t", 3, 4)
b = parse_series("2*t^-1 + 2*t", 3, 4)
show("a =", format_series(a))
show("b =", format_series(b))

print("arithmetic is mod 3, precision is tracked")
show("a + b =", format_series(a.add(b)))          # both coefficient sums hit 3
show("a + a =", format_series(a.add(a)))
show("2 * a =", format_series(a.scale(2)))
show("t^2 * a =", format_series(a.shift(2)))      # shifting moves the O-tail too
show("a truncated to O(t^2) =", format_series(a.truncate(2)))

print("mixed precision: the sum only knows what both terms know")
c = parse_series("1 + t + t^2 + O(t^3)", 3, 99)
show("c =", format_series(c))
show("a + c =", format_series(a.add(c)))

print("d-tuples print component-wise")
v = SeriesVector([parse_series("1 + t", 2, 4), parse_series("t^-2", 2, 4)])
show("v =", format_vector(v))
show("t * v =", format_vector(v.shift(1)))

print("windows give exact finite coordinates between two exponents")
w = LatticeWindow(-2, 2, d=2, p=2)
coords = window_coords(v, w)
show(f"v on [{w.lo}, {w.hi}) ->", [int(c) for c in coords])
show("and back ->", format_vector(coords_to_vector(coords, w)))
print("done")
