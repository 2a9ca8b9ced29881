"""Dense matrices over a prime field."""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from ..errors import SingularMatrix
from .field import PrimeField
from .kernels import charpoly_mod, rref_mod


class DenseMatrix:
    """Row-major matrix with canonical residues in [0, q).

    Entries live in a numpy array: int64 when q < 2^31, object (Python ints)
    otherwise.
    """

    __slots__ = ("field", "data")

    def __init__(self, field: PrimeField, data):
        self.field = field
        if isinstance(data, np.ndarray) and data.dtype == np.int64 and field.small:
            arr = data % field.q
        else:
            arr = np.array(data, dtype=object)
            if arr.ndim == 1 and arr.size == 0:
                arr = arr.reshape(0, 0)
            arr = arr % field.q if arr.size else arr
            if field.small:
                arr = arr.astype(np.int64)
        self.data = arr

    @classmethod
    def zeros(cls, field: PrimeField, rows: int, cols: int) -> DenseMatrix:
        if field.small:
            return cls(field, np.zeros((rows, cols), dtype=np.int64))
        return cls(field, np.full((rows, cols), 0, dtype=object))

    @classmethod
    def identity(cls, field: PrimeField, n: int) -> DenseMatrix:
        m = cls.zeros(field, n, n)
        for i in range(n):
            m.data[i, i] = 1
        return m

    @classmethod
    def from_rows(cls, field: PrimeField, rows: Iterable[Sequence[int]], cols: int | None = None) -> DenseMatrix:
        rows = [list(r) for r in rows]
        if not rows:
            return cls.zeros(field, 0, cols or 0)
        return cls(field, np.array([[int(v) for v in r] for r in rows], dtype=object))

    @property
    def rows(self) -> int:
        return self.data.shape[0]

    @property
    def cols(self) -> int:
        return self.data.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def __getitem__(self, idx):
        v = self.data[idx]
        return int(v) if np.ndim(v) == 0 else v

    def tolist(self) -> list[list[int]]:
        return [[int(v) for v in row] for row in self.data]

    def __eq__(self, other) -> bool:
        return (isinstance(other, DenseMatrix) and self.field == other.field
                and self.shape == other.shape and self.tolist() == other.tolist())

    def __repr__(self) -> str:
        return f"DenseMatrix({self.tolist()}, q={self.field.q})"

    def __matmul__(self, other: DenseMatrix) -> DenseMatrix:
        return DenseMatrix(self.field, matmul_mod(self.data, other.data, self.field.q))

    def transpose(self) -> DenseMatrix:
        return DenseMatrix(self.field, self.data.T.copy())

    def apply(self, vec: Sequence[int]) -> list[int]:
        q = self.field.q
        return [sum(int(a) * int(b) for a, b in zip(row, vec)) % q for row in self.data]

    def rank(self) -> int:
        return rref(self)[1]

    def inverse(self) -> DenseMatrix:
        n = self.rows
        if n != self.cols:
            raise SingularMatrix("non-square matrix")
        aug = np.concatenate([self.data, DenseMatrix.identity(self.field, n).data], axis=1)
        R, piv = rref_mod(aug, self.field.q)
        if piv[:n] != list(range(n)) or len(piv) < n:
            raise SingularMatrix("matrix is singular")
        return DenseMatrix(self.field, R[:, n:].copy())

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def charpoly(self) -> list[int]:
        return charpoly_mod(self.data, self.field.q)


def matmul_mod(A: np.ndarray, B: np.ndarray, q: int) -> np.ndarray:
    if A.dtype == np.int64 and B.dtype == np.int64 and A.shape[1] * (q - 1) ** 2 < 1 << 63:
        return (A @ B) % q
    out = np.empty((A.shape[0], B.shape[1]), dtype=object)
    for i in range(A.shape[0]):
        for j in range(B.shape[1]):
            out[i, j] = sum(int(a) * int(b) for a, b in zip(A[i], B[:, j])) % q
    return out if A.dtype == object else out.astype(np.int64)


def rref(M: DenseMatrix) -> tuple[DenseMatrix, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns."""
    if M.rows == 0 or M.cols == 0:
        return DenseMatrix(M.field, M.data.copy()), 0, []
    R, piv = rref_mod(M.data, M.field.q)
    return DenseMatrix(M.field, R), len(piv), piv
