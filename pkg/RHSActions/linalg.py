import logging
from collections import defaultdict
from math import gcd
from typing import Iterable, Optional

import numpy as np
import sympy
from attrs import define, field

doc = """
Integer linear algebra for the cohomology computations: Smith normal forms over Z
(exact, object arrays of Python ints) and over Z/m (int64 arrays reduced mod m), with
optional tracking of the left and right transforms and their inverses.
"""


def _as_object_matrix(values) -> np.ndarray:
    arr = np.array(values, dtype=object)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ValueError(f"an integer matrix needs two dimensions, got shape {arr.shape}")
    return np.vectorize(int, otypes=[object])(arr) if arr.size else arr


@define(frozen=True, eq=False)
class IntMatrix:
    entries: np.ndarray = field(converter=_as_object_matrix)

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1])

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(np.eye(n, dtype=np.int64).astype(object).reshape(n, n))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64).astype(object))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        if self.rows == 0 or other.cols == 0 or self.cols == 0:
            return IntMatrix.zeros(self.rows, other.cols)
        return IntMatrix(self.entries.dot(other.entries))

    def __eq__(self, other) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.entries.shape == other.entries.shape and bool((self.entries == other.entries).all())

    def to_list(self) -> list:
        return [[int(x) for x in row] for row in self.entries]

    def diagonal(self) -> list:
        return [int(self.entries[i, i]) for i in range(min(self.rows, self.cols))]

    def is_unimodular(self) -> bool:
        if self.rows != self.cols:
            return False
        if self.rows == 0:
            return True
        return sympy.Matrix(self.to_list()).det() in (1, -1)


@define
class SmithResult:
    """U A V = D (over Z, or mod `modulus`); transforms are None unless tracked."""

    D: np.ndarray
    diagonal: list
    modulus: Optional[int] = None
    U: Optional[np.ndarray] = None
    U_inv: Optional[np.ndarray] = None
    V: Optional[np.ndarray] = None
    V_inv: Optional[np.ndarray] = None


def _unit_to_gcd(d: int, m: int) -> int:
    """A unit u mod m with d*u = gcd(d, m) mod m."""
    g = gcd(d, m)
    m_red = m // g
    u = pow(d // g, -1, m_red) if m_red > 1 else 1
    while gcd(u, m) != 1:
        u += m_red
    return u % m


class _SmithReducer:
    """
    Euclid-style elimination: the pivot is the nonzero entry of least size in the
    active block; rows and columns are reduced by floor quotients until the pivot
    clears them and divides the remaining block.
    """

    def __init__(self, A, modulus: Optional[int], left: bool, right: bool):
        self.modulus = modulus
        if modulus is None:
            self.M = np.array(A, dtype=object).copy()
            dtype = object
        else:
            self.M = np.asarray(A, dtype=np.int64) % modulus
            dtype = np.int64
        rows, cols = self.M.shape
        self.rows, self.cols = rows, cols
        self.U = np.eye(rows, dtype=np.int64).astype(dtype) if left else None
        self.U_inv = np.eye(rows, dtype=np.int64).astype(dtype) if left else None
        self.V = np.eye(cols, dtype=np.int64).astype(dtype) if right else None
        self.V_inv = np.eye(cols, dtype=np.int64).astype(dtype) if right else None

    def _mod(self, arr):
        if self.modulus is not None:
            arr %= self.modulus
        return arr

    def _swap_rows(self, i: int, j: int):
        if i == j:
            return
        self.M[[i, j]] = self.M[[j, i]]
        if self.U is not None:
            self.U[[i, j]] = self.U[[j, i]]
            self.U_inv[:, [i, j]] = self.U_inv[:, [j, i]]

    def _swap_cols(self, i: int, j: int):
        if i == j:
            return
        self.M[:, [i, j]] = self.M[:, [j, i]]
        if self.V is not None:
            self.V[:, [i, j]] = self.V[:, [j, i]]
            self.V_inv[[i, j]] = self.V_inv[[j, i]]

    def _scale_row(self, t: int, u: int, u_inv: int):
        self.M[t] = self._mod(self.M[t] * u)
        if self.U is not None:
            self.U[t] = self._mod(self.U[t] * u)
            self.U_inv[:, t] = self._mod(self.U_inv[:, t] * u_inv)

    def _clear_column(self, t: int, p) -> bool:
        q = self.M[t + 1 :, t] // p
        if not q.any():
            return not self.M[t + 1 :, t].any()
        self.M[t + 1 :, t:] = self._mod(self.M[t + 1 :, t:] - q[:, None] * self.M[t, t:][None, :])
        if self.U is not None:
            self.U[t + 1 :] = self._mod(self.U[t + 1 :] - q[:, None] * self.U[t][None, :])
            self.U_inv[:, t] = self._mod(self.U_inv[:, t] + self.U_inv[:, t + 1 :].dot(q))
        return not self.M[t + 1 :, t].any()

    def _clear_row(self, t: int, p) -> bool:
        q = self.M[t, t + 1 :] // p
        if not q.any():
            return not self.M[t, t + 1 :].any()
        self.M[t:, t + 1 :] = self._mod(self.M[t:, t + 1 :] - self.M[t:, t][:, None] * q[None, :])
        if self.V is not None:
            self.V[:, t + 1 :] = self._mod(self.V[:, t + 1 :] - self.V[:, t][:, None] * q[None, :])
            self.V_inv[t] = self._mod(self.V_inv[t] + q.dot(self.V_inv[t + 1 :]))
        return not self.M[t, t + 1 :].any()

    def _add_row(self, target: int, source: int):
        self.M[target] = self._mod(self.M[target] + self.M[source])
        if self.U is not None:
            self.U[target] = self._mod(self.U[target] + self.U[source])
            self.U_inv[:, source] = self._mod(self.U_inv[:, source] - self.U_inv[:, target])

    def _pick_pivot(self, t: int):
        block = self.M[t:, t:]
        sizes = np.abs(block) if self.modulus is None else block
        nonzero = block != 0
        if not nonzero.any():
            return None
        big = (max(int(x) for x in sizes[nonzero]) + 1) if self.modulus is None else self.modulus + 1
        masked = np.where(nonzero, sizes, big)
        flat = int(np.argmin(masked))
        return t + flat // block.shape[1], t + flat % block.shape[1]

    def reduce(self) -> SmithResult:
        t = 0
        limit = min(self.rows, self.cols)
        while t < limit:
            pivot = self._pick_pivot(t)
            if pivot is None:
                break
            while True:
                self._swap_rows(t, pivot[0])
                self._swap_cols(t, pivot[1])
                if self.modulus is None and self.M[t, t] < 0:
                    self._scale_row(t, -1, -1)
                p = self.M[t, t]
                column_done = self._clear_column(t, p)
                row_done = self._clear_row(t, p)
                if column_done and row_done:
                    if p == 1 or (self.modulus is not None and gcd(int(p), self.modulus) == 1):
                        break
                    rest = self.M[t + 1 :, t + 1 :]
                    bad = np.argwhere(rest % p != 0) if rest.size else np.zeros((0, 2))
                    if len(bad) == 0:
                        break
                    self._add_row(t, t + 1 + int(bad[0][0]))
                pivot = self._pick_pivot(t)
            t += 1

        diagonal = [int(self.M[i, i]) for i in range(limit)]
        if self.modulus is not None:
            for i, d in enumerate(diagonal):
                if d != 0 and gcd(d, self.modulus) != d:
                    u = _unit_to_gcd(d, self.modulus)
                    self._scale_row(i, u, pow(u, -1, self.modulus))
            diagonal = [int(self.M[i, i]) for i in range(limit)]
        return SmithResult(self.M, diagonal, self.modulus, self.U, self.U_inv, self.V, self.V_inv)


def smith_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """U A V = S over Z, with U, V unimodular and S diagonal with d1 | d2 | ..."""
    if A.rows == 0 or A.cols == 0:
        return A, IntMatrix.identity(A.rows), IntMatrix.identity(A.cols)
    result = _SmithReducer(A.entries, None, left=True, right=True).reduce()
    logging.debug(f"Smith normal form diagonal: {result.diagonal}")
    return IntMatrix(result.D), IntMatrix(result.U), IntMatrix(result.V)


def smith_normal_form_mod(A: np.ndarray, modulus: int, left: bool = False, right: bool = False) -> SmithResult:
    """Smith form over Z/modulus; diagonal entries are normalized to divisors of the modulus (0 stays 0)."""
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got shape {A.shape}")
    if modulus == 1 or A.size == 0:
        rows, cols = A.shape
        eye = lambda n: np.eye(n, dtype=np.int64)
        return SmithResult(
            np.zeros_like(A),
            [0] * min(rows, cols),
            modulus,
            eye(rows) if left else None,
            eye(rows) if left else None,
            eye(cols) if right else None,
            eye(cols) if right else None,
        )
    return _SmithReducer(A, modulus, left=left, right=right).reduce()


def elementary_divisors_mod(A: np.ndarray, modulus: int) -> list[int]:
    """gcd(d_i, modulus) for the integer elementary divisors d_i of A (zero divisors give modulus)."""
    result = smith_normal_form_mod(A, modulus)
    return [d if d else modulus for d in result.diagonal]


def invariant_factors(orders: Iterable[int]) -> list[int]:
    """Invariant factors d1 | d2 | ... of a direct sum of cyclic groups of the given orders."""
    prime_powers = defaultdict(list)
    for order in orders:
        if order < 1:
            raise ValueError(f"cyclic orders must be positive, got {order}")
        for p, e in sympy.factorint(order).items():
            prime_powers[p].append(p**e)
    length = max((len(v) for v in prime_powers.values()), default=0)
    factors = [1] * length
    for p, powers in prime_powers.items():
        powers.sort(reverse=True)
        for i, q in enumerate(powers):
            factors[length - 1 - i] *= q
    return factors


def matmul_mod(A: np.ndarray, B: np.ndarray, modulus: int) -> np.ndarray:
    """A @ B reduced mod modulus, falling back to Python ints when int64 could overflow."""
    A = np.asarray(A)
    B = np.asarray(B)
    inner = A.shape[-1] if A.ndim else 1
    if inner * (modulus - 1) ** 2 < 2**62:
        return (A.astype(np.int64) @ B.astype(np.int64)) % modulus
    product = A.astype(object).dot(B.astype(object)) % modulus
    return product.astype(np.int64)
