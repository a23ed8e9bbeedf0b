"""Gaussian elimination over any exact field.

Entries only need +, -, *, /, == and truthiness for the zero test;
fractions.Fraction and valfield.PuiseuxRational both qualify.  All
routines copy their inputs and are deterministic (first nonzero pivot).
"""

from __future__ import annotations


def _copy(mat):
    return [list(row) for row in mat]


def rank(mat) -> int:
    if not mat:
        return 0
    a = _copy(mat)
    rows, cols = len(a), len(a[0])
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv_lead = a[r][c]
        for i in range(r + 1, rows):
            if a[i][c]:
                f = a[i][c] / inv_lead
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def det(mat):
    a = _copy(mat)
    n = len(a)
    assert all(len(row) == n for row in a)
    sign_flip = False
    result = None
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            zero = a[0][0] - a[0][0]
            return zero
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign_flip = not sign_flip
        lead = a[c][c]
        result = lead if result is None else result * lead
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] / lead
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    if sign_flip:
        result = -result
    return result


def invert(mat):
    """Inverse of a square matrix; raises ZeroDivisionError if singular."""
    a = _copy(mat)
    n = len(a)
    one = None
    for i in range(n):
        for x in a[i]:
            if x:
                one = x / x
                break
        if one is not None:
            break
    if one is None:
        raise ZeroDivisionError("singular matrix")
    zero = one - one
    aug = [row + [one if i == j else zero for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c]), None)
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        aug[c], aug[piv] = aug[piv], aug[c]
        lead = aug[c][c]
        aug[c] = [x / lead for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [row[n:] for row in aug]


def matvec(mat, vec):
    out = []
    for row in mat:
        acc = None
        for a, b in zip(row, vec):
            term = a * b
            acc = term if acc is None else acc + term
        out.append(acc)
    return out


def matmul(a, b):
    bt = list(zip(*b))
    return [[_dot(row, col) for col in bt] for row in a]


def _dot(u, v):
    acc = None
    for a, b in zip(u, v):
        term = a * b
        acc = term if acc is None else acc + term
    return acc


def row_space_rank(rows) -> int:
    return rank(rows)
