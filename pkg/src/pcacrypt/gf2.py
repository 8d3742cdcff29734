"""GF(2) matrix helpers over int bitsets.

A matrix is a tuple of row masks with bit j of a row being column j. All
arithmetic is XOR/AND, so rows stay plain Python ints regardless of size.
"""

from __future__ import annotations

Matrix = tuple[int, ...]


def identity(n: int) -> Matrix:
    return tuple(1 << i for i in range(n))


def zero(n: int) -> Matrix:
    return (0,) * n


def mat_vec(rows: Matrix, v: int) -> int:
    """Matrix-vector product; bit i of the result pairs with rows[i]."""
    out = 0
    for i, row in enumerate(rows):
        out |= ((row & v).bit_count() & 1) << i
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(x ^ y for x, y in zip(a, b))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    out = []
    for row in a:
        acc = 0
        r = row
        while r:
            j = (r & -r).bit_length() - 1
            acc ^= b[j]
            r &= r - 1
        out.append(acc)
    return tuple(out)


def mat_pow(a: Matrix, e: int) -> Matrix:
    if e < 0:
        raise ValueError("negative exponent")
    result = identity(len(a))
    base = a
    while e:
        if e & 1:
            result = mat_mul(result, base)
        e >>= 1
        if e:
            base = mat_mul(base, base)
    return result


def rank(rows: Matrix, ncols: int) -> int:
    """Rank via Gaussian elimination."""
    work = list(rows)
    r = 0
    for col in range(ncols):
        pivot = next((k for k in range(r, len(work)) if (work[k] >> col) & 1), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        for k in range(len(work)):
            if k != r and (work[k] >> col) & 1:
                work[k] ^= work[r]
        r += 1
    return r


def is_invertible(rows: Matrix) -> bool:
    n = len(rows)
    return rank(rows, n) == n


def solvable(rows: Matrix, rhs: int, ncols: int) -> bool:
    """Whether rows . x = rhs admits any solution (rhs bit i pairs with rows[i])."""
    aug = [row | (((rhs >> i) & 1) << ncols) for i, row in enumerate(rows)]
    r = 0
    for col in range(ncols):
        pivot = next((k for k in range(r, len(aug)) if (aug[k] >> col) & 1), None)
        if pivot is None:
            continue
        aug[r], aug[pivot] = aug[pivot], aug[r]
        for k in range(len(aug)):
            if k != r and (aug[k] >> col) & 1:
                aug[k] ^= aug[r]
        r += 1
    return all((row >> ncols) & 1 == 0 for row in aug[r:])


def geometric_series(a: Matrix, e: int) -> Matrix:
    """I + a + a^2 + ... + a^(e-1), computed in O(log e) multiplications."""
    n = len(a)
    if e < 0:
        raise ValueError("negative series length")
    if e == 0:
        return zero(n)
    if e == 1:
        return identity(n)
    half = geometric_series(a, e // 2)
    total = mat_add(half, mat_mul(mat_pow(a, e // 2), half))
    if e & 1:
        total = mat_add(total, mat_pow(a, e - 1))
    return total


def factorize(m: int) -> dict[int, int]:
    """Prime factorization by trial division (intended for modest m)."""
    if m < 1:
        raise ValueError(f"cannot factor {m}")
    factors: dict[int, int] = {}
    for p in (2, 3):
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
    p = 5
    while p * p <= m:
        while m % p == 0:
            factors[p] = factors.get(p, 0) + 1
            m //= p
        p += 2
    if m > 1:
        factors[m] = factors.get(m, 0) + 1
    return factors


# Widths whose universal-exponent factorization stays cheap; beyond this only
# power-of-two orders (detected by squaring) are resolved.
_FACTOR_WIDTH_LIMIT = 32


def matrix_order(rows: Matrix) -> int:
    """Multiplicative order of an invertible matrix.

    Repeated squaring settles every power-of-two order (the only orders a
    unipotent matrix can have). Anything else is found by reducing the
    universal exponent 2^ceil(log2 n) * lcm(2^d - 1, d = 1..n) prime by
    prime, which needs the factorizations of the 2^d - 1 terms and is
    therefore gated on matrix size.
    """
    n = len(rows)
    if not is_invertible(rows):
        raise ValueError("matrix is singular; no multiplicative order")
    ident = identity(n)
    power = rows
    for k in range(n.bit_length() + 1):
        if power == ident:
            return 1 << k
        power = mat_mul(power, power)

    if n > _FACTOR_WIDTH_LIMIT:
        raise ValueError(
            f"order of a {n}x{n} matrix is not a power of two; "
            f"exact search is only supported up to width {_FACTOR_WIDTH_LIMIT}"
        )
    factors: dict[int, int] = {2: n.bit_length()}
    for d in range(1, n + 1):
        for p, e in factorize((1 << d) - 1).items():
            factors[p] = max(factors.get(p, 0), e)
    exponent = 1
    for p, e in factors.items():
        exponent *= p**e
    if mat_pow(rows, exponent) != ident:
        raise ArithmeticError("universal exponent failed; matrix is not invertible")
    order = exponent
    for p in sorted(factors):
        while order % p == 0 and mat_pow(rows, order // p) == ident:
            order //= p
    return order
