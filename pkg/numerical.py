from itertools import combinations, permutations

import numpy as np

# ---------------------------------------------------------------------------
# F_{p^2} lookup tables
# ---------------------------------------------------------------------------

def prime_square_tables(p: int, nr: int) -> dict[str, np.ndarray]:
    """Build add/sub/mul/neg/inv tables for F_p[w]/(w^2 - nr), element u + v*p."""
    q = p * p
    idx = np.arange(q, dtype=np.int64)
    u, v = idx % p, idx // p
    u1, u2 = u[:, np.newaxis], u[np.newaxis, :]
    v1, v2 = v[:, np.newaxis], v[np.newaxis, :]

    add = (u1 + u2) % p + ((v1 + v2) % p) * p
    sub = (u1 - u2) % p + ((v1 - v2) % p) * p
    mul = (u1 * u2 + nr * v1 * v2) % p + ((u1 * v2 + v1 * u2) % p) * p
    neg = (-u) % p + ((-v) % p) * p

    inv = np.argmax(mul == 1, axis=1).astype(np.int64)
    inv[0] = 0
    return {"add": add, "sub": sub, "mul": mul, "neg": neg, "inv": inv}


def smallest_nonresidue(p: int) -> int:
    """Smallest quadratic non-residue modulo an odd prime."""
    for n in range(2, p):
        if pow(n, (p - 1) // 2, p) == p - 1:
            return n
    raise ValueError(f"no non-residue modulo {p}")


# ---------------------------------------------------------------------------
# Vectorized kernels (finite fields)
# ---------------------------------------------------------------------------

def encoded_matmul(F, A: np.ndarray, B: np.ndarray) -> np.ndarray:
    """Matrix product of encoded F_{p^2} arrays via two integer matmuls."""
    p, nr = F.p, F.nr
    U1, V1 = A % p, A // p
    U2, V2 = B % p, B // p
    re = (U1 @ U2 + nr * ((V1 @ V2) % p)) % p
    im = (U1 @ V2 + V1 @ U2) % p
    return re + im * p


def rref_table(F, M: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Row reduce an encoded matrix with fancy-indexed lookup tables."""
    M = np.array(M, dtype=np.int64, copy=True)
    if M.ndim != 2 or M.size == 0:
        return M.reshape(0, M.shape[1] if M.ndim == 2 else 0), []
    nrows, ncols = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        nz = np.nonzero(M[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            M[[r, k]] = M[[k, r]]
        M[r] = F.mul_np[F.inv_np[M[r, c]], M[r]]
        factors = M[:, c].copy()
        factors[r] = 0
        rows = np.nonzero(factors)[0]
        if rows.size:
            M[rows] = F.sub_np[M[rows], F.mul_np[factors[rows, np.newaxis], M[r][np.newaxis, :]]]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return M[:r], pivots


def batch_det(F, mats: np.ndarray) -> np.ndarray:
    """Determinants of a stack of encoded n x n matrices."""
    n = mats.shape[1]
    if n > 4:
        return _batch_det_elimination(F, mats)
    acc = np.zeros(mats.shape[0], dtype=np.int64)
    for perm in permutations(range(n)):
        term = mats[:, 0, perm[0]]
        for row in range(1, n):
            term = F.mul_np[term, mats[:, row, perm[row]]]
        acc = F.add_np[acc, term] if _parity(perm) == 0 else F.sub_np[acc, term]
    return acc


def _batch_det_elimination(F, mats: np.ndarray) -> np.ndarray:
    """Gaussian elimination run in lockstep over the whole stack."""
    M = np.array(mats, dtype=np.int64, copy=True)
    m, n, _ = M.shape
    det = np.ones(m, dtype=np.int64)
    idx = np.arange(m)
    for c in range(n):
        nonzero = M[:, c:, c] != 0
        det[~nonzero.any(axis=1)] = 0
        piv = c + np.argmax(nonzero, axis=1)
        swapped = piv != c
        top, other = M[idx, c].copy(), M[idx, piv].copy()
        M[idx, c], M[idx, piv] = other, top
        det[swapped] = F.neg_np[det[swapped]]
        pivot = M[:, c, c]
        det = F.mul_np[det, pivot]
        factors = F.mul_np[M[:, c + 1:, c], F.inv_np[pivot][:, np.newaxis]]
        M[:, c + 1:, :] = F.sub_np[M[:, c + 1:, :], F.mul_np[factors[:, :, np.newaxis], M[:, c, np.newaxis, :]]]
    return det


def _parity(perm: tuple[int, ...]) -> int:
    inversions = sum(1 for i in range(len(perm)) for j in range(i + 1, len(perm)) if perm[i] > perm[j])
    return inversions % 2


def batch_rank_below(F, mats: np.ndarray, k: int) -> np.ndarray:
    """
    Mask of the matrices in a stack whose rank is < k, i.e. all k x k minors
    vanish. Minors are tested one at a time on the survivors only.

    Complexity:
        Time:  O(m * k! * k) lookups for the first minor, usually far less after
    """
    m, nrows, ncols = mats.shape
    alive = np.arange(m)
    for rows in combinations(range(nrows), k):
        if alive.size == 0:
            break
        for cols in combinations(range(ncols), k):
            sub = mats[alive][:, list(rows)][:, :, list(cols)]
            alive = alive[batch_det(F, sub) == 0]
            if alive.size == 0:
                break
    mask = np.zeros(m, dtype=bool)
    mask[alive] = True
    return mask


# ---------------------------------------------------------------------------
# Generic exact linear algebra
# ---------------------------------------------------------------------------

def rref(F, M: list[list]) -> tuple[list[list], list[int]]:
    """
    Reduced row echelon form over any FieldContract.

    Returns the nonzero rows and the pivot columns. Finite fields take the
    table path; the symbolic tower uses sparse elimination.
    """
    if not M:
        return [], []
    if F.is_finite:
        R, pivots = rref_table(F, np.array(M, dtype=np.int64))
        return R.tolist(), pivots
    return _rref_sparse(F, M)


def _rref_sparse(F, M: list[list]) -> tuple[list[list], list[int]]:
    rows = [list(r) for r in M]
    nrows, ncols = len(rows), len(rows[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        k = next((k for k in range(r, nrows) if not F.is_zero(rows[k][c])), None)
        if k is None:
            continue
        rows[r], rows[k] = rows[k], rows[r]
        scale = F.inv(rows[r][c])
        rows[r] = [x if F.is_zero(x) else F.mul(scale, x) for x in rows[r]]
        support = [j for j in range(c, ncols) if not F.is_zero(rows[r][j])]
        for k in range(nrows):
            if k == r or F.is_zero(rows[k][c]):
                continue
            f = rows[k][c]
            target = rows[k]
            for j in support:
                target[j] = F.sub(target[j], F.mul(f, rows[r][j]))
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return rows[:r], pivots


def rank(F, M: list[list]) -> int:
    return len(rref(F, M)[1])


def nullspace(F, M: list[list], ncols: int | None = None) -> list[list]:
    """Basis of {v : Mv = 0}, one vector per free column."""
    if ncols is None:
        ncols = len(M[0]) if M else 0
    R, pivots = rref(F, M) if M else ([], [])
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [F.zero] * ncols
        v[free] = F.one
        for row, c in zip(R, pivots):
            v[c] = F.neg(row[free])
        basis.append(v)
    return basis


def rowspace(F, M: list[list]) -> list[list]:
    return rref(F, M)[0] if M else []


def in_span(F, basis: list[list], v: list) -> bool:
    if not basis:
        return all(F.is_zero(x) for x in v)
    return rank(F, basis + [v]) == rank(F, basis)


def mat_mul(F, A: list[list], B: list[list]) -> list[list]:
    if not A or not B:
        return [[] for _ in A]
    if F.is_finite:
        return encoded_matmul(F, np.array(A, dtype=np.int64), np.array(B, dtype=np.int64)).tolist()
    cols = len(B[0])
    out = []
    for row in A:
        acc = [F.zero] * cols
        for k, a in enumerate(row):
            if F.is_zero(a):
                continue
            for j, b in enumerate(B[k]):
                if not F.is_zero(b):
                    acc[j] = F.add(acc[j], F.mul(a, b))
        out.append(acc)
    return out


def mat_vec(F, A: list[list], v: list) -> list:
    return [col[0] for col in mat_mul(F, A, [[x] for x in v])] if A else []


def mat_add(F, A: list[list], B: list[list]) -> list[list]:
    return [[F.add(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_sub(F, A: list[list], B: list[list]) -> list[list]:
    return [[F.sub(a, b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def mat_scale(F, s, A: list[list]) -> list[list]:
    return [[F.mul(s, a) for a in row] for row in A]


def mat_eq(F, A: list[list], B: list[list]) -> bool:
    return all(F.eq(a, b) for ra, rb in zip(A, B) for a, b in zip(ra, rb))


def identity(F, n: int) -> list[list]:
    return [[F.one if i == j else F.zero for j in range(n)] for i in range(n)]


def zeros(F, rows: int, cols: int) -> list[list]:
    return [[F.zero] * cols for _ in range(rows)]


def transpose(M: list[list]) -> list[list]:
    return [list(col) for col in zip(*M)]


def diag(F, values: list) -> list[list]:
    n = len(values)
    return [[values[i] if i == j else F.zero for j in range(n)] for i in range(n)]


def det(F, M: list[list]):
    """Determinant by Gaussian elimination over a field."""
    A = [list(r) for r in M]
    n = len(A)
    result = F.one
    for c in range(n):
        k = next((k for k in range(c, n) if not F.is_zero(A[k][c])), None)
        if k is None:
            return F.zero
        if k != c:
            A[c], A[k] = A[k], A[c]
            result = F.neg(result)
        result = F.mul(result, A[c][c])
        inv = F.inv(A[c][c])
        for r in range(c + 1, n):
            if F.is_zero(A[r][c]):
                continue
            f = F.mul(A[r][c], inv)
            A[r] = [F.sub(x, F.mul(f, y)) for x, y in zip(A[r], A[c])]
    return result


def inverse(F, M: list[list]) -> list[list]:
    n = len(M)
    aug = [list(row) + ident for row, ident in zip(M, identity(F, n))]
    R, pivots = rref(F, aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in R[:n]]


def normalize(F, v: list) -> tuple:
    """Scale a nonzero vector so its first nonzero entry is 1."""
    for x in v:
        if not F.is_zero(x):
            s = F.inv(x)
            return tuple(F.mul(s, y) for y in v)
    raise ValueError("cannot normalize the zero vector")


def dot(F, u: list, v: list):
    acc = F.zero
    for a, b in zip(u, v):
        if not (F.is_zero(a) or F.is_zero(b)):
            acc = F.add(acc, F.mul(a, b))
    return acc


def bilinear(F, Q: list[list], u: list, v: list):
    """u^T Q v."""
    return dot(F, u, mat_vec(F, Q, v))
