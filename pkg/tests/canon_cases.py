"""Hand-written parser inputs with hand-computed canonical outputs.

Each expected string was worked out on paper from the grammar and the
printer convention (ascending exponents, no zero terms, bare integer
for exponent 0, bare ``t`` for exponent 1, ``O``-tail always printed),
then frozen here.  Used by both the unit tests and the acceptance run.

Tuples are (input_text, p, default_prec, expected_canonical).
"""

CANON_CASES = [
    ("t", 2, 4, "t + O(t^4)"),
    ("1+t", 2, 4, "1 + t + O(t^4)"),
    ("t+1", 2, 4, "1 + t + O(t^4)"),
    ("t + t", 2, 4, "0 + O(t^4)"),
    ("3*t", 3, 4, "0 + O(t^4)"),
    ("4*t^2", 3, 5, "t^2 + O(t^5)"),
    ("2t", 3, 4, "2*t + O(t^4)"),
    ("  1 +  t^3 ", 2, 4, "1 + t^3 + O(t^4)"),
    ("t^-2", 5, 1, "t^-2 + O(t^1)"),
    ("0", 7, 3, "0 + O(t^3)"),
    ("0 + O(t^6)", 2, 4, "0 + O(t^6)"),
    ("t^5", 2, 4, "0 + O(t^4)"),
    ("1 + t^9 + O(t^3)", 2, 7, "1 + O(t^3)"),
    ("t^0", 3, 2, "1 + O(t^2)"),
    ("5", 3, 2, "2 + O(t^2)"),
    ("1*t^1", 2, 3, "t + O(t^3)"),
    ("2*t^-1 + t", 3, 4, "2*t^-1 + t + O(t^4)"),
    ("t + 2*t", 5, 3, "3*t + O(t^3)"),
    ("t^2 + t + 1", 2, 4, "1 + t + t^2 + O(t^4)"),
    ("1 + 1", 2, 3, "0 + O(t^3)"),
    ("1 + 1", 3, 3, "2 + O(t^3)"),
    ("t^-1 + t^-3", 2, 0, "t^-3 + t^-1 + O(t^0)"),
    ("6*t^4", 5, 9, "t^4 + O(t^9)"),
    ("0 + 0", 2, 5, "0 + O(t^5)"),
    ("2 * t^3", 5, 6, "2*t^3 + O(t^6)"),
    ("t + t^2 + t + O(t^5)", 2, 9, "t^2 + O(t^5)"),
    ("4 + 3*t^-2", 5, 2, "3*t^-2 + 4 + O(t^2)"),
    ("96*t", 97, 3, "96*t + O(t^3)"),
    ("t^-1 + 2*t^-1", 3, 1, "0 + O(t^1)"),
    ("1 + t + O(t^1)", 2, 5, "1 + O(t^1)"),
]
