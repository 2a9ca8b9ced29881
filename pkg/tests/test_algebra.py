import os
import subprocess
import sys

import numpy as np
import pytest
import sympy
from sympy.polys.matrices import DomainMatrix

from gbcrypt.algebra import DenseMatrix, PrimeField, UniPoly, field_equation_gcd, field_inv, roots_int, rref, uni_roots
from gbcrypt.algebra import kernels
from gbcrypt.errors import InversionOfZero, SingularMatrix, ZeroPolynomial

from conftest import scan_roots


def test_field_construction():
    assert PrimeField(2**127 + 45).q == 2**127 + 45
    with pytest.raises(ValueError):
        PrimeField(7743)  # 3 * 29 * 89
    with pytest.raises(ValueError):
        PrimeField(2)
    with pytest.raises(ValueError):
        PrimeField(2**128 + 51)


def test_field_inv_examples(F7):
    assert field_inv(F7(3)) == 5
    assert field_inv(PrimeField(7741)(1)) == 1
    with pytest.raises(InversionOfZero):
        field_inv(F7(0))


def test_field_element_arithmetic(F7):
    a, b = F7(5), F7(4)
    assert a + b == 2 and a - b == 1 and a * b == 6 and -a == 2
    assert a / b == a * field_inv(b)
    assert a**-1 == 3 and a**6 == 1
    assert 10 - a == 5


def test_large_modulus_inverse():
    F = PrimeField(2**127 + 45)
    a = F(2**126 + 12345)
    assert a * field_inv(a) == 1


def test_rref_examples(F7):
    _, rank, piv = rref(DenseMatrix.identity(F7, 3))
    assert rank == 3 and piv == [0, 1, 2]
    assert rref(DenseMatrix.zeros(F7, 2, 3))[1] == 0
    R, rank, piv = rref(DenseMatrix.from_rows(F7, [[1, 2], [2, 4]]))
    assert rank == 1 and piv == [0] and R.tolist() == [[1, 2], [0, 0]]


def test_rref_matches_sympy():
    q = 31
    rng = np.random.default_rng(1)
    for _ in range(20):
        A = rng.integers(0, q, size=(5, 7))
        A[3] = (A[0] + 2 * A[1]) % q
        R, rank, _ = rref(DenseMatrix.from_rows(PrimeField(q), A.tolist()))
        dm = DomainMatrix([[sympy.GF(q)(int(v)) for v in row] for row in A], (5, 7), sympy.GF(q))
        ref, pivots = dm.rref()
        want = [[int(v) % q for v in row] for row in ref.to_Matrix().tolist()]
        assert R.tolist() == want and rank == len(pivots)


def test_matrix_ops(F7):
    M = DenseMatrix.from_rows(F7, [[1, 2], [3, 4]])
    inv = M.inverse()
    assert (M @ inv).tolist() == [[1, 0], [0, 1]]
    assert M.transpose().tolist() == [[1, 3], [2, 4]]
    assert M.apply([1, 1]) == [3, 0]
    assert M[1, 0] == 3
    with pytest.raises(SingularMatrix):
        DenseMatrix.from_rows(F7, [[1, 2], [2, 4]]).inverse()


def test_charpoly_matches_sympy():
    q = 7741
    rng = np.random.default_rng(2)
    for n in (1, 2, 5, 9):
        A = rng.integers(0, q, size=(n, n))
        cp = DenseMatrix.from_rows(PrimeField(q), A.tolist()).charpoly()
        want = sympy.Matrix(A.tolist()).charpoly().all_coeffs()[::-1]
        assert cp == [int(c) % q for c in want]


def test_charpoly_large_modulus():
    q = 2**127 + 45
    A = [[3, 1, 4], [1, 5, 9], [2, 6, 5]]
    cp = DenseMatrix.from_rows(PrimeField(q), A).charpoly()
    want = sympy.Matrix(A).charpoly().all_coeffs()[::-1]
    assert cp == [int(c) % q for c in want]


def test_kernels_backends_agree():
    if kernels.numba is None:
        pytest.skip("numba missing")
    q = 7741
    rng = np.random.default_rng(3)
    for shape in ((6, 9), (12, 12), (9, 4)):
        A = rng.integers(0, q, size=shape, dtype=np.int64)
        A[-1] = (3 * A[0]) % q
        R1, p1 = kernels._rref_numpy(A.copy(), q)
        R2 = A.copy()
        p2 = kernels._rref_numba(R2, q)
        assert list(p1) == [int(c) for c in p2]
        assert np.array_equal(R1 % q, R2)
    B = rng.integers(0, q, size=(10, 10), dtype=np.int64)
    H = kernels._hessenberg_numba(B.copy(), q)
    assert kernels._charpoly_numpy(B.copy(), q) == [int(c) for c in kernels._hess_charpoly_numba(H, q)]


def test_numpy_fallback_flag():
    code = ("from gbcrypt.algebra import kernels, DenseMatrix, PrimeField;"
            "print(kernels.backend());"
            "print(DenseMatrix.from_rows(PrimeField(7), [[1, 2], [2, 4]]).rank())")
    env = dict(os.environ, GBCRYPT_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "1"]


def test_field_equation_gcd_examples(F7):
    assert field_equation_gcd(UniPoly(F7, [-1, 0, 1])).coeffs == [6, 0, 1]
    assert field_equation_gcd(UniPoly(F7, [1, 0, 1])).coeffs == [1]
    assert field_equation_gcd(UniPoly(F7, [-2, 0, 1])).coeffs == [5, 0, 1]
    with pytest.raises(ZeroPolynomial):
        field_equation_gcd(UniPoly(F7, []))


def test_uni_roots_examples(F7):
    assert uni_roots(UniPoly(F7, [-2, 0, 1])) == {F7(3), F7(4)}
    assert uni_roots(UniPoly(F7, [-5, 1])) == {F7(5)}
    assert uni_roots(UniPoly(F7, [1, 0, 1])) == set()
    with pytest.raises(ZeroPolynomial):
        uni_roots(UniPoly(F7, [0]))


def test_roots_split_large_field():
    F = PrimeField(2**127 + 45)
    q = F.q
    c = next(c for c in range(2, 100) if pow(c, (q - 1) // 2, q) == q - 1)  # non-residue
    roots = [5, 2**100 + 7, 2**126]
    f = UniPoly.from_roots(F, roots) * UniPoly(F, [-c, 0, 1])
    assert roots_int(f) == sorted(roots)


def test_gcd_degree_counts_distinct_roots():
    q = 101
    F = PrimeField(q)
    f = UniPoly.from_roots(F, [3, 3, 7, 50]) * UniPoly(F, [2, 0, 1])
    assert field_equation_gcd(f).degree == len(scan_roots(f.coeffs, q)) == 3


def test_unipoly_arithmetic(F7):
    a = UniPoly(F7, [1, 2, 3])
    b = UniPoly(F7, [4, 1])
    qq, rr = divmod(a, b)
    assert (qq * b + rr).coeffs == a.coeffs and rr.degree < b.degree
    assert a.gcd(a * b).coeffs == a.monic().coeffs
    assert UniPoly(F7, [0, 0]).is_zero() and UniPoly(F7, [0, 0]).coeffs == []
