import numpy as np
import scipy.linalg
import scipy.sparse
from scipy.sparse.linalg import LinearOperator, eigs, splu

from nonlocal_momentum.BoundaryPhase import BoundaryPhase
from nonlocal_momentum.Domain import Side
from nonlocal_momentum.NonlocalOperator import NonlocalOperator
from nonlocal_momentum.Parameters import Parameters
from nonlocal_momentum.Quadrature import Quadrature
from nonlocal_momentum.errors import OracleError, TruncationError, ValidationError

MIN_POINTS = 64
SHIFT_OFFSET = 0.0137  # keeps the shift off any lattice eigenvalue


class DiscreteOperator:
    """
    Box-scheme discretisation of a nonlocal momentum operator

    On each segment of nodes
        i (psi_{j+1} - psi_j)/h + sum_k u_k(x_{j+1/2}) mu_k
            = lambda (psi_j + psi_{j+1})/2,
    with one auxiliary unknown mu_k = l_k(psi) per nonlocal term and the
    boundary condition as an extra row. The result is a pencil (A, B) whose
    finite eigenvalues approximate the point spectrum to second order.
    """

    def __init__(self, operator, segments, params, meta):
        self.operator = operator
        self.segments = [np.asarray(s, dtype=float) for s in segments]
        self._params = params
        self.meta = meta
        self.terms = [(u, l) for u, l in operator.terms if not u.is_zero]
        self.offsets = np.cumsum([0] + [len(s) for s in self.segments])[:-1]
        self.n_nodes = int(sum(len(s) for s in self.segments))
        self.grid = np.concatenate(self.segments)
        self.weights = np.concatenate([_trapezoid(s) for s in self.segments])
        self.h = min(float(np.min(np.diff(s))) for s in self.segments)
        self.A, self.B = self._assemble()
        self.size = self.A.shape[0]

    # Constructors

    @classmethod
    def interval(cls, v1, v2, alpha, N, params=None):
        if params is None:
            params = Parameters(validate=False)
        if N < MIN_POINTS:
            raise ValidationError(f"N must be at least {MIN_POINTS}, got {N}")
        operator = NonlocalOperator.interval_two(v1, v2, alpha)
        meta = {"model": "interval", "N": int(N), "alpha": operator.alpha.alpha}
        return cls(operator, [np.linspace(0.0, 1.0, N + 1)], params, meta)

    @classmethod
    def axis(cls, v, alpha, L, N, params=None):
        """[-L, 0] and [0, L] with N/2 cells each, closed periodically at +-L"""
        if params is None:
            params = Parameters(validate=False)
        if N < MIN_POINTS:
            raise ValidationError(f"N must be at least {MIN_POINTS}, got {N}")
        _check_truncation(v, L, params)
        operator = NonlocalOperator.axis_single(v, alpha)
        half = N // 2
        segments = [np.linspace(-L, 0.0, half + 1), np.linspace(0.0, L, half + 1)]
        meta = {
            "model": "axis",
            "N": int(2 * half),
            "L": float(L),
            "alpha": operator.alpha.alpha,
        }
        return cls(operator, segments, params, meta)

    # Assembly

    def _node_index(self, x, side):
        for s, off in zip(self.segments, self.offsets):
            if x == s[0] and side > 0:
                return off
            if x == s[-1] and side < 0:
                return off + len(s) - 1
        raise ValidationError(f"no node carries the value at {x} ({side.name})")

    def _node_values(self, w):
        """w on every node, one-sided at segment ends, averaged at jumps"""
        values = []
        for s in self.segments:
            plus, minus = w(s, Side.PLUS), w(s, Side.MINUS)
            node = 0.5 * (plus + minus)
            node[0], node[-1] = plus[0], minus[-1]
            values.append(node)
        return np.concatenate(values)

    def functional_row(self, functional):
        """The row r with r @ psi_nodes = l(psi)"""
        row = np.zeros(self.n_nodes, dtype=complex)
        for c, x, side in functional.points:
            row[self._node_index(x, side)] += c
        for d, w in functional.products:
            if not w.is_zero:
                row += d * self.weights * np.conj(self._node_values(w))
        return row

    def _assemble(self):
        # unknowns: node values and one mu_k per term
        n = self.n_nodes + len(self.terms)
        rows, cols, a_vals, b_vals = [], [], [], []

        def put(r, c, a, b=0.0):
            r, c = np.broadcast_arrays(np.atleast_1d(r), np.atleast_1d(c))
            rows.append(r.ravel())
            cols.append(c.ravel())
            a_vals.append(np.broadcast_to(np.asarray(a, dtype=complex), r.shape).ravel())
            b_vals.append(np.broadcast_to(np.asarray(b, dtype=complex), r.shape).ravel())

        r = 0
        for s, off in zip(self.segments, self.offsets):
            h = np.diff(s)
            mid = s[:-1] + 0.5 * h
            j = np.arange(len(h))
            put(r + j, off + j, -1j / h, 0.5)
            put(r + j, off + j + 1, 1j / h, 0.5)
            for k, (u, _) in enumerate(self.terms):
                put(r + j, self.n_nodes + k, u(mid))
            r += len(h)

        every = np.arange(self.n_nodes)
        for k, (_, functional) in enumerate(self.terms):
            put(r, self.n_nodes + k, 1.0)
            put(np.full(self.n_nodes, r), every, -self.functional_row(functional))
            r += 1

        put(np.full(self.n_nodes, r), every, self.functional_row(self.operator.boundary))
        r += 1

        if len(self.segments) == 2:
            # periodic closure of the truncated axis
            put(r, self.n_nodes - 1, 1.0)
            put(r, 0, -1.0)
            r += 1

        if r != n:
            raise OracleError(f"assembled {r} rows for {n} unknowns")
        rows, cols = np.concatenate(rows), np.concatenate(cols)
        A = scipy.sparse.coo_matrix(
            (np.concatenate(a_vals), (rows, cols)), shape=(n, n)
        ).tocsc()
        B = scipy.sparse.coo_matrix(
            (np.concatenate(b_vals), (rows, cols)), shape=(n, n)
        ).tocsc()
        return A, B

    # Eigenvalues

    def expected_count(self, window):
        lo, hi = window
        if self.meta["model"] == "axis":
            return int((hi - lo) * self.meta["L"] / np.pi) + 16
        return int((hi - lo) / (2.0 * np.pi)) + 12

    def eigenpairs(self, window):
        """
        Finite eigenvalues with real part in the window and their node
        vectors, before any filtering
        """
        lo, hi = window
        if not lo < hi:
            raise ValidationError(f"empty window {window}")
        try:
            if self.size <= self._params.oracle_dense_limit:
                values, vectors = scipy.linalg.eig(
                    self.A.toarray(), self.B.toarray()
                )
            else:
                values, vectors = self._shift_invert(window)
        except (np.linalg.LinAlgError, RuntimeError, ValueError) as err:
            raise OracleError(f"eigen-solver failed: {err}")
        finite = np.isfinite(values)
        values, vectors = values[finite], vectors[:, finite]
        inside = (values.real >= lo) & (values.real <= hi)
        order = np.argsort(values[inside].real)
        return values[inside][order], vectors[:, inside][:, order]

    def _shift_invert(self, window):
        lo, hi = window
        sigma = 0.5 * (lo + hi) + SHIFT_OFFSET * (hi - lo)
        lu = splu((self.A - sigma * self.B).tocsc())
        op = LinearOperator(
            self.A.shape, matvec=lambda x: lu.solve(self.B @ x), dtype=complex
        )
        radius = max(hi - sigma, sigma - lo)
        k = self.expected_count(window)
        while True:
            k = min(k, self.size - 2)
            mu, vectors = eigs(op, k=k, which="LM")
            if np.min(np.abs(mu)) < 1.0 / radius or k == self.size - 2:
                break
            k *= 2
        with np.errstate(divide="ignore"):
            values = sigma + 1.0 / mu
        return values, vectors

    def localisation(self, vector):
        """Fraction of the L2 mass within |x| <= L/2"""
        psi = vector[: self.n_nodes]
        mass = self.weights * np.abs(psi) ** 2
        total = np.sum(mass)
        if total == 0.0:
            return 0.0
        inner = np.abs(self.grid) <= 0.5 * self.meta["L"]
        return float(np.sum(mass[inner]) / total)

    def eigenvalues(self, window, with_vectors=False):
        """
        Eigenvalues of the pencil in the window, sorted, with spurious ones
        removed: imaginary part below 10 h and, on the axis, localised modes
        only
        """
        values, vectors = self.eigenpairs(window)
        keep = np.abs(values.imag) < 10.0 * self.h
        if self.meta["model"] == "axis":
            fraction = self._params.localisation_fraction
            keep &= np.array(
                [self.localisation(vectors[:, i]) >= fraction
                 for i in range(len(values))],
                dtype=bool,
            )
        values, vectors = values[keep].real, vectors[:, keep]
        if with_vectors:
            return values, vectors[: self.n_nodes]
        return list(values)


def _trapezoid(nodes):
    h = np.diff(nodes)
    w = np.zeros(len(nodes))
    w[:-1] += 0.5 * h
    w[1:] += 0.5 * h
    return w


def _check_truncation(v, L, params):
    if v.is_zero:
        return
    lo, hi = v.support
    if lo >= -L and hi <= L:
        return
    quadrature = Quadrature(params.quadrature)

    def mass(a, b):
        if not a < b:
            return 0.0
        return quadrature.integrate(
            lambda x: np.abs(v(x)) ** 2, a, b, v.breakpoints
        ).real

    total = mass(lo, hi)
    tail = mass(lo, min(-L, hi)) + mass(max(L, lo), hi)
    if tail > params.tail_tol * max(total, 1.0):
        raise TruncationError(tail, L)


def discretize_interval(v1, v2, alpha, N, params=None):
    return DiscreteOperator.interval(v1, v2, alpha, N, params)


def discretize_axis(v, alpha, L, N, params=None):
    return DiscreteOperator.axis(v, alpha, L, N, params)


def oracle_eigenvalues(D, window):
    return D.eigenvalues(window)


def free_discrete_eigenvalues(alpha, N, window):
    """Exact eigenvalues of the scheme without potentials"""
    alpha = BoundaryPhase.coerce(alpha).alpha
    h = 1.0 / N
    n = np.arange(-N // 2 + 1, N // 2 + 1)
    lam = (2.0 / h) * np.tan((2.0 * np.pi * n - alpha) / (2.0 * N))
    lo, hi = window
    return np.sort(lam[(lam >= lo) & (lam <= hi)])


