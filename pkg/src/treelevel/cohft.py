"""Formal CohFT-algebra calculus over truncated exact series.

An algebra is a finite basis with symmetric multilinear products mu^n
(fundamental-class insertions only, even parity); a morphism is a
family phi^n plus a curvature term phi^0; a trace is a family tau^n of
scalar correlators, optionally with a two-point-class family tau_pp.
The operations below realize the star product, the derivative identity
that makes a morphism's potential a homomorphism of tangent algebras,
trace composition through the exponential formula, the induced metric
and its isometry property, and the small quantum differential equation.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .combis import set_partitions
from .errors import (
    CurvedMorphismUnsupported,
    DegenerateQDE,
    MissingArity,
)
from .series import Series, SeriesRing, multinomial


def _as_series(ring, c):
    if isinstance(c, Series):
        return c
    return ring.scalar(c)


def as_vector(ring, dim, x):
    """Coerce a basis index, scalar list or series vector to a series vector."""
    if isinstance(x, int):
        return tuple(ring.one() if i == x else ring.zero() for i in range(dim))
    out = []
    for entry in x:
        out.append(_as_series(ring, entry))
    if len(out) != dim:
        raise ValueError("vector has the wrong length")
    return tuple(out)


def generic_point(ring, dim):
    """The formal point whose coordinates are the ring's t-variables."""
    if len(ring.tvars) < dim:
        raise ValueError("ring needs at least one t-variable per coordinate")
    return tuple(ring.t(i) for i in range(dim))


def _apply_tensor(ring, dim_out, tensor, args):
    """Evaluate a symmetric multilinear map stored by sorted index tuple.

    ``tensor`` maps sorted input tuples to {output index: coefficient};
    ``args`` is a sequence of series vectors.
    """
    n = len(args)
    out = [ring.zero() for _ in range(dim_out)]
    dim_in = len(args[0]) if args else 0
    for idx in itertools.product(range(dim_in), repeat=n):
        val = tensor.get(tuple(sorted(idx)))
        if not val:
            continue
        coeff = ring.one()
        dead = False
        for k, i in enumerate(idx):
            entry = args[k][i]
            if entry.is_zero():
                dead = True
                break
            coeff = coeff * entry
        if dead:
            continue
        for j, c in val.items():
            out[j] = out[j] + _as_series(ring, c) * coeff
    return tuple(out)


def _apply_scalar_tensor(ring, tensor, args):
    """Same as :func:`_apply_tensor` for scalar-valued symmetric maps."""
    n = len(args)
    total = ring.zero()
    dim_in = len(args[0]) if args else 0
    for idx in itertools.product(range(dim_in), repeat=n):
        c = tensor.get(tuple(sorted(idx)))
        if not c:
            continue
        coeff = ring.one()
        dead = False
        for k, i in enumerate(idx):
            entry = args[k][i]
            if entry.is_zero():
                dead = True
                break
            coeff = coeff * entry
        if not dead:
            total = total + _as_series(ring, c) * coeff
    return total


@dataclass
class CohFTAlgebra:
    """Finite even basis with symmetric products mu^n, n >= 2.

    ``mu[n]`` maps a sorted tuple of input indices to a dict
    {output index: coefficient}; coefficients may carry q powers.
    """

    ring: SeriesRing
    basis: tuple
    mu: dict = field(default_factory=dict)

    @property
    def dim(self):
        return len(self.basis)

    def arities(self):
        return sorted(self.mu)

    def apply_mu(self, n, args):
        if n not in self.mu:
            raise MissingArity(f"mu^{n} not supplied")
        return _apply_tensor(self.ring, self.dim, self.mu[n], args)


def algebra_from_terms(ring, basis, terms):
    """Build an algebra from (inputs, output index, coefficient) triples."""
    mu = {}
    for inputs, out, coeff in terms:
        n = len(inputs)
        tensor = mu.setdefault(n, {})
        slot = tensor.setdefault(tuple(sorted(inputs)), {})
        slot[out] = slot.get(out, ring.zero()) + _as_series(ring, coeff)
    return CohFTAlgebra(ring, tuple(basis), mu)


def small_quantum_projective(k, ring=None, t_cap=4, q_cap=4):
    """Small quantum cohomology of the (k-1)-dimensional projective space:
    basis 1, xi, ..., xi^(k-1) with xi^i * xi^j = q^floor((i+j)/k) xi^((i+j) mod k).
    """
    if ring is None:
        ring = SeriesRing(tvars=[f"t{i}" for i in range(k)], t_cap=t_cap,
                          q_cap=q_cap)
    terms = []
    for i in range(k):
        for j in range(i, k):
            s = i + j
            terms.append(((i, j), s % k, ring.q_power(s // k)))
    return algebra_from_terms(ring, tuple(f"xi^{i}" for i in range(k)), terms)


def star_product(alg, v, a, b):
    """a *_v b = sum_n mu^n(a, b, v, ..., v) / (n-2)! within the caps."""
    ring = alg.ring
    if 2 not in alg.mu:
        raise MissingArity("a product needs the arity-two tensor")
    a = as_vector(ring, alg.dim, a)
    b = as_vector(ring, alg.dim, b)
    v = as_vector(ring, alg.dim, v)
    out = [ring.zero() for _ in range(alg.dim)]
    for n in alg.arities():
        term = alg.apply_mu(n, [a, b] + [v] * (n - 2))
        f = Fraction(1, math.factorial(n - 2))
        for i in range(alg.dim):
            out[i] = out[i] + term[i] * f
    return tuple(out)


def check_associativity(alg, v=None):
    """(a *_v b) *_v c = a *_v (b *_v c) on all basis triples.

    Returns (ok, witness); the witness names the first failing triple
    and the differing coefficient.
    """
    ring = alg.ring
    if v is None:
        v = generic_point(ring, alg.dim)
    for i, j, k in itertools.product(range(alg.dim), repeat=3):
        lhs = star_product(alg, v, star_product(alg, v, i, j), k)
        rhs = star_product(alg, v, i, star_product(alg, v, j, k))
        for c in range(alg.dim):
            diff = lhs[c] - rhs[c]
            if not diff.is_zero():
                key = sorted(diff.coeffs)[0]
                return False, {
                    "triple": (alg.basis[i], alg.basis[j], alg.basis[k]),
                    "component": alg.basis[c],
                    "exponent": key,
                    "lhs": lhs[c].coeffs.get(key, Fraction(0)),
                    "rhs": rhs[c].coeffs.get(key, Fraction(0)),
                }
    return True, None


@dataclass
class Morphism:
    """Family phi^n: V^n -> W with curvature phi0 (flat means phi0 = 0)."""

    ring: SeriesRing
    dim_v: int
    dim_w: int
    phi: dict = field(default_factory=dict)     # n >= 1
    phi0: tuple = None

    def __post_init__(self):
        if self.phi0 is None:
            self.phi0 = tuple(self.ring.zero() for _ in range(self.dim_w))

    @property
    def flat(self):
        return all(c.is_zero() for c in self.phi0)

    def arities(self):
        return sorted(self.phi)

    def apply_phi(self, n, args):
        if n == 0:
            return self.phi0
        if n not in self.phi:
            raise MissingArity(f"phi^{n} not supplied")
        return _apply_tensor(self.ring, self.dim_w, self.phi[n], args)


def identity_morphism(ring, dim):
    phi1 = {(i,): {i: ring.one()} for i in range(dim)}
    return Morphism(ring, dim, dim, {1: phi1})


def morphism_from_terms(ring, dim_v, dim_w, terms, phi0=None):
    phi = {}
    for inputs, out, coeff in terms:
        n = len(inputs)
        tensor = phi.setdefault(n, {})
        slot = tensor.setdefault(tuple(sorted(inputs)), {})
        slot[out] = slot.get(out, ring.zero()) + _as_series(ring, coeff)
    phi0_vec = None
    if phi0 is not None:
        phi0_vec = as_vector(ring, dim_w, phi0)
    return Morphism(ring, dim_v, dim_w, phi, phi0_vec)


def push_forward(phi, v):
    """phi(v) = phi0 + sum_{n>=1} phi^n(v, ..., v) / n!."""
    ring = phi.ring
    v = as_vector(ring, phi.dim_v, v)
    out = list(phi.phi0)
    for n in phi.arities():
        term = phi.apply_phi(n, [v] * n)
        f = Fraction(1, math.factorial(n))
        for i in range(phi.dim_w):
            out[i] = out[i] + term[i] * f
    return tuple(out)


def derivative(phi, v, a):
    """D_v phi(a) = sum_{n>=1} phi^n(a, v, ..., v) / (n-1)!."""
    ring = phi.ring
    v = as_vector(ring, phi.dim_v, v)
    a = as_vector(ring, phi.dim_v, a)
    out = [ring.zero() for _ in range(phi.dim_w)]
    for n in phi.arities():
        term = phi.apply_phi(n, [a] + [v] * (n - 1))
        f = Fraction(1, math.factorial(n - 1))
        for i in range(phi.dim_w):
            out[i] = out[i] + term[i] * f
    return tuple(out)


def check_star_morphism(phi, alg_v, alg_w, v=None, pairs=None):
    """D_v phi(a *_v b) = D_v phi(a) *_phi(v) D_v phi(b) on basis pairs.

    ``pairs`` restricts the checked basis pairs (useful when the source
    product is only faithful below a degree); default is all pairs.
    Returns (ok, witness).
    """
    ring = phi.ring
    if v is None:
        v = generic_point(ring, phi.dim_v)
    v = as_vector(ring, phi.dim_v, v)
    w = push_forward(phi, v)
    if pairs is None:
        pairs = itertools.combinations_with_replacement(range(phi.dim_v), 2)
    for i, j in pairs:
        lhs = derivative(phi, v, star_product(alg_v, v, i, j))
        da = derivative(phi, v, i)
        db = derivative(phi, v, j)
        rhs = star_product(alg_w, w, da, db)
        for c in range(phi.dim_w):
            diff = lhs[c] - rhs[c]
            if not diff.is_zero():
                key = sorted(diff.coeffs)[0]
                return False, {
                    "pair": (i, j),
                    "component": c,
                    "exponent": key,
                    "lhs": lhs[c].coeffs.get(key, Fraction(0)),
                    "rhs": rhs[c].coeffs.get(key, Fraction(0)),
                }
    return True, None


@dataclass
class Trace:
    """Scalar correlator family tau^n, with an optional two-point-class
    family tau_pp (symmetric in the two point slots and in the bulk)."""

    ring: SeriesRing
    dim: int
    tau: dict = field(default_factory=dict)      # n -> tensor -> scalar
    tau_pp: dict = None                          # bulk n -> tensor -> scalar

    def arities(self):
        return sorted(self.tau)

    def apply_tau(self, n, args):
        if n not in self.tau:
            raise MissingArity(f"tau^{n} not supplied")
        return _apply_scalar_tensor(self.ring, self.tau[n], args)

    def apply_tau_pp(self, pts, bulk):
        n = len(bulk)
        if self.tau_pp is None or n not in self.tau_pp:
            raise MissingArity(f"tau_pp with {n} bulk slots not supplied")
        ring = self.ring
        total = ring.zero()
        for pidx in itertools.product(range(self.dim), repeat=2):
            for bidx in itertools.product(range(self.dim), repeat=n):
                c = self.tau_pp[n].get((tuple(sorted(pidx)), tuple(sorted(bidx))))
                if not c:
                    continue
                coeff = _as_series(ring, c)
                for k, i in enumerate(pidx):
                    coeff = coeff * pts[k][i]
                for k, i in enumerate(bidx):
                    coeff = coeff * bulk[k][i]
                total = total + coeff
        return total


def trace_from_terms(ring, dim, terms, pp_terms=None):
    tau = {}
    for inputs, coeff in terms:
        n = len(inputs)
        tensor = tau.setdefault(n, {})
        key = tuple(sorted(inputs))
        tensor[key] = tensor.get(key, ring.zero()) + _as_series(ring, coeff)
    tau_pp = None
    if pp_terms is not None:
        tau_pp = {}
        for pts, bulk, coeff in pp_terms:
            n = len(bulk)
            tensor = tau_pp.setdefault(n, {})
            key = (tuple(sorted(pts)), tuple(sorted(bulk)))
            tensor[key] = tensor.get(key, ring.zero()) + _as_series(ring, coeff)
    return Trace(ring, dim, tau, tau_pp)


def potential(trace, v):
    """tau(v) = sum_n tau^n(v, ..., v) / n!."""
    ring = trace.ring
    v = as_vector(ring, trace.dim, v)
    total = ring.zero()
    for n in trace.arities():
        total = total + trace.apply_tau(n, [v] * n) / math.factorial(n)
    return total


@dataclass
class ComposedTrace:
    substitution: Series
    partition_sum: Series

    @property
    def agree(self):
        return self.substitution == self.partition_sum


def compose_trace(tau_w, phi, v, order=None):
    """Potential of the composed trace, computed along two routes.

    Substitution route: evaluate the target potential at phi(v).
    Partition route: sum over unordered partitions of the diagonal
    inputs (empty blocks feeding the curvature), with the multinomial
    weight of each block-size profile.  The two agree by the
    exponential formula; both are returned so the agreement is
    checkable coefficientwise.
    """
    ring = phi.ring
    v = as_vector(ring, phi.dim_v, v)
    if order is None:
        order = ring.t_cap

    subst = potential(tau_w, push_forward(phi, v))

    max_r = max(tau_w.arities(), default=0)
    images = {}
    for m in sorted(set(phi.arities()) | {0}):
        if m <= order:
            images[m] = phi.apply_phi(m, [v] * m)
    curved = not phi.flat
    total = ring.zero()
    for n in range(0, order + 1):
        for profile in _partition_profiles(n):
            r0 = len(profile)
            count = _profile_count(n, profile)
            kmax = (max_r - r0) if curved else 0
            if any(m not in images for m in profile):
                continue  # absent arities are zero, as in the substitution
            for k in range(0, kmax + 1):
                r = r0 + k
                if r not in tau_w.tau:
                    continue
                args = [images[m] for m in profile] + [images[0]] * k
                weight = Fraction(count, math.factorial(n) * math.factorial(k))
                total = total + tau_w.apply_tau(r, args) * weight
    return ComposedTrace(subst, total)


def _partition_profiles(n):
    """Nonincreasing positive block-size profiles of an n-set (n=0: one
    empty profile)."""
    if n == 0:
        yield ()
        return

    def rec(remaining, maximum):
        if remaining == 0:
            yield ()
            return
        for first in range(min(remaining, maximum), 0, -1):
            for rest in rec(remaining - first, first):
                yield (first,) + rest

    yield from rec(n, n)


def _profile_count(n, profile):
    """Number of set partitions of an n-set with the given size profile."""
    count = multinomial(n, profile)
    mult = {}
    for p in profile:
        mult[p] = mult.get(p, 0) + 1
    for m in mult.values():
        count //= math.factorial(m)
    return count


def bilinear_form(trace, v, a, b):
    """g_v(a, b) = sum_n tau_pp^(n+2)(a, b; v, ..., v) / n!."""
    ring = trace.ring
    v = as_vector(ring, trace.dim, v)
    a = as_vector(ring, trace.dim, a)
    b = as_vector(ring, trace.dim, b)
    if trace.tau_pp is None:
        raise MissingArity("trace has no two-point-class family")
    total = ring.zero()
    for n in sorted(trace.tau_pp):
        total = total + trace.apply_tau_pp([a, b], [v] * n) / math.factorial(n)
    return total


def pp_family_from(tau_w, phi, bulk_max):
    """Two-point-class family on the source induced by the partition sum.

    For each bulk arity n the tensor entry at (points (x1, x2), bulk y)
    sums over set partitions of the inputs with x1, x2 in distinct
    blocks; the blocks of x1 and x2 feed the point slots of the target
    family.  Only flat morphisms are supported.
    """
    if not phi.flat:
        raise CurvedMorphismUnsupported("the induced family needs phi0 = 0")
    ring = phi.ring
    dim = phi.dim_v
    basis = [as_vector(ring, dim, i) for i in range(dim)]
    tau_pp = {}
    for n in range(0, bulk_max + 1):
        tensor = {}
        for pidx in itertools.combinations_with_replacement(range(dim), 2):
            for bidx in itertools.combinations_with_replacement(range(dim), n):
                items = [("p", 0), ("p", 1)] + [("b", i) for i in range(n)]
                total = ring.zero()
                for blocks in set_partitions(items):
                    homes = [None, None]
                    for bi, block in enumerate(blocks):
                        for tag, i in block:
                            if tag == "p":
                                homes[i] = bi
                    if homes[0] == homes[1]:
                        continue
                    pts = []
                    bulk_args = []
                    dead = False
                    for bi, block in enumerate(blocks):
                        members = sorted(block)
                        vecs = []
                        for tag, i in members:
                            if tag == "p":
                                vecs.insert(0, basis[pidx[i]])
                            else:
                                vecs.append(basis[bidx[i]])
                        m = len(vecs)
                        if m not in phi.phi:
                            dead = True
                            break
                        img = phi.apply_phi(m, vecs)
                        if bi in homes:
                            pts.append((homes.index(bi), img))
                        else:
                            bulk_args.append(img)
                    if dead:
                        continue
                    r = len(bulk_args)
                    if tau_w.tau_pp is None or r not in tau_w.tau_pp:
                        continue
                    pts.sort()
                    total = total + tau_w.apply_tau_pp(
                        [img for _, img in pts], bulk_args)
                if not total.is_zero():
                    tensor[(pidx, bidx)] = total
        tau_pp[n] = tensor
    return Trace(ring, dim, {}, tau_pp)


def check_isometry(tau_v, tau_w, phi, v=None):
    """g_V,v(a, b) = g_W,phi(v)(D_v phi a, D_v phi b) on basis pairs.

    The source family must have been induced by the partition sum for
    this to hold; checking the identity checks exactly that
    consistency.  Returns (ok, witness).
    """
    if not phi.flat:
        raise CurvedMorphismUnsupported("isometry check restricts to phi0 = 0")
    ring = phi.ring
    if v is None:
        v = generic_point(ring, phi.dim_v)
    v = as_vector(ring, phi.dim_v, v)
    w = push_forward(phi, v)
    for i, j in itertools.combinations_with_replacement(range(phi.dim_v), 2):
        lhs = bilinear_form(tau_v, v, i, j)
        rhs = bilinear_form(tau_w, w, derivative(phi, v, i),
                            derivative(phi, v, j))
        diff = lhs - rhs
        if not diff.is_zero():
            key = sorted(diff.coeffs)[0]
            return False, {
                "pair": (i, j),
                "exponent": key,
                "lhs": lhs.coeffs.get(key, Fraction(0)),
                "rhs": rhs.coeffs.get(key, Fraction(0)),
            }
    return True, None


# -- quantum differential equation -------------------------------------------

def _mat_mul_scalar(a, b):
    k = len(a)
    return [[sum(a[i][m] * b[m][j] for m in range(k)) for j in range(k)]
            for i in range(k)]


def _poly_mat_combine(a, b, left=True):
    """Multiply a Fraction matrix into a matrix of hbar-inverse polys.

    ``left`` selects which factor is the scalar matrix: a*b with a
    scalar when True, with b scalar when False.
    """
    k = len(a)
    out = [[{} for _ in range(k)] for _ in range(k)]
    for i in range(k):
        for j in range(k):
            acc = out[i][j]
            for m in range(k):
                if left:
                    c, poly = a[i][m], b[m][j]
                else:
                    poly, c = a[i][m], b[m][j]
                if c == 0:
                    continue
                for h, x in poly.items():
                    acc[h] = acc.get(h, Fraction(0)) + c * x
    return out


@dataclass
class QdeSolution:
    """Fundamental solution of the small quantum differential equation.

    ``sigma`` solves hbar q d/dq sigma = (xi *) sigma - sigma A0 with
    sigma = identity at q = 0, where A0 is the classical part of the
    product matrix; the full flat section is sigma times the
    (non-polynomial) classical factor q^(A0/hbar), which is why the
    polynomial solver works in this gauge.
    """

    alg: CohFTAlgebra
    xi: int
    ring: SeriesRing
    sigma: tuple              # dim x dim of Series in q, hbar^-1
    classical: tuple          # A0 as Fractions

    def residual(self):
        """hbar q d/dq sigma - M sigma + sigma A0, as a series matrix."""
        ring = self.ring
        dim = self.alg.dim
        m = _xi_star_matrix(self.alg, self.xi, ring)
        out = []
        for i in range(dim):
            row = []
            for j in range(dim):
                term = _shift_h(self.sigma[i][j].q_log_derivative(), -1)
                for k in range(dim):
                    term = term - m[i][k] * self.sigma[k][j]
                    term = term + self.sigma[i][k] * ring.scalar(self.classical[k][j])
                row.append(term)
            out.append(tuple(row))
        return tuple(out)

    def residual_is_zero(self):
        return all(c.is_zero() for row in self.residual() for c in row)


def _shift_h(s, delta):
    """Multiply by hbar^(-delta); delta = -1 multiplies by hbar."""
    out = {}
    for (texp, qnum, hpow), c in s.coeffs.items():
        h = hpow + delta
        if h < 0:
            raise ValueError("positive powers of hbar are not representable")
        key = (texp, qnum, h)
        if s.ring._inside(key):
            out[key] = c
    return Series(s.ring, out)


def _xi_star_matrix(alg, xi, ring):
    cols = [star_product(alg, [ring.zero()] * alg.dim, xi, j)
            for j in range(alg.dim)]
    # series live in alg.ring; move them into the solver ring
    out = [[ring.zero() for _ in range(alg.dim)] for _ in range(alg.dim)]
    for j, col in enumerate(cols):
        for i, entry in enumerate(col):
            acc = ring.zero()
            for (texp, qnum, hpow), c in entry.coeffs.items():
                if any(texp) or hpow:
                    raise DegenerateQDE(
                        "the product at the basepoint must be constant")
                scaled = qnum * ring.q_denominator // alg.ring.q_denominator
                if scaled > ring.q_cap_num:
                    continue  # the solver only sees terms through its cap
                acc = acc + Series(ring, {((), scaled, 0): c})
            out[i][j] = acc
    return out


def solve_qde(alg, xi=1, q_cap=3):
    """Solve the small quantum differential equation order by order in q.

    The product operator xi* splits into its classical q^0 part A0 plus
    positive q-degree corrections; the recursion inverts
    (hbar k - ad_A0), which requires A0 nilpotent (a q^0 quantum term
    raises DegenerateQDE).  Returns the matrix solution with identity
    leading term; its residual in the solved gauge is exactly zero.
    """
    dim = alg.dim
    denom = alg.ring.q_denominator
    qnum_cap = int(Fraction(q_cap) * denom)
    ring = SeriesRing(tvars=(), q_denominator=denom, t_cap=0,
                      q_cap=q_cap, h_cap=qnum_cap * (dim + 1) + 2)

    m = _xi_star_matrix(alg, xi, ring)
    # split by q exponent numerator
    a_parts = {}
    for i in range(dim):
        for j in range(dim):
            for (_, qnum, _), c in m[i][j].coeffs.items():
                part = a_parts.setdefault(
                    qnum, [[Fraction(0)] * dim for _ in range(dim)])
                part[i][j] += c
    a0 = a_parts.get(0, [[Fraction(0)] * dim for _ in range(dim)])

    power = [row[:] for row in a0]
    for _ in range(dim):
        power = _mat_mul_scalar(power, a0)
    if any(x != 0 for row in power for x in row):
        raise DegenerateQDE("classical part of the product is not nilpotent")

    def ad(x):
        left = _poly_mat_combine(a0, x, left=True)
        right = _poly_mat_combine(x, a0, left=False)
        return [[{h: left[i][j].get(h, Fraction(0)) - right[i][j].get(h, Fraction(0))
                  for h in set(left[i][j]) | set(right[i][j])}
                 for j in range(dim)] for i in range(dim)]

    # sigma_k as matrices of {hbar_power: Fraction}
    sigma = {0: [[{0: Fraction(1)} if i == j else {} for j in range(dim)]
                 for i in range(dim)]}
    for k in range(1, qnum_cap + 1):
        rhs = [[{} for _ in range(dim)] for _ in range(dim)]
        for d, a_d in a_parts.items():
            if d == 0 or d > k or (k - d) not in sigma:
                continue
            contrib = _poly_mat_combine(a_d, sigma[k - d], left=True)
            for i in range(dim):
                for j in range(dim):
                    for h, c in contrib[i][j].items():
                        rhs[i][j][h] = rhs[i][j].get(h, Fraction(0)) + c
        # invert (hbar k/denom - ad_A0): sum_j ad^j(rhs) (denom/k)^{j+1} hbar^{-(j+1)}
        rate = Fraction(denom, k)
        term = rhs
        sk = [[{} for _ in range(dim)] for _ in range(dim)]
        j = 0
        while any(term[i][l] for i in range(dim) for l in range(dim)):
            f = rate ** (j + 1)
            for i in range(dim):
                for l in range(dim):
                    for h, c in term[i][l].items():
                        if c:
                            sk[i][l][h + j + 1] = (
                                sk[i][l].get(h + j + 1, Fraction(0)) + c * f)
            term = ad(term)
            j += 1
            if j > dim * dim + 2:
                raise DegenerateQDE("adjoint action failed to nilpotate")
        sigma[k] = sk

    mats = []
    for i in range(dim):
        row = []
        for j in range(dim):
            coeffs = {}
            for k, mat in sigma.items():
                for h, c in mat[i][j].items():
                    if c:
                        coeffs[((), k, h)] = c
            row.append(Series(ring, coeffs))
        mats.append(tuple(row))
    return QdeSolution(alg, xi, ring, tuple(mats), tuple(tuple(r) for r in a0))


# -- randomized instances for the property suites -----------------------------

def random_even_algebra(seed, dim=2, max_arity=3, t_cap=3, density=0.7):
    """A random symmetric product family (no axioms imposed)."""
    rng = random.Random(seed)
    ring = SeriesRing(tvars=[f"t{i}" for i in range(dim)], t_cap=t_cap)
    mu = {}
    for n in range(2, max_arity + 1):
        tensor = {}
        for idx in itertools.combinations_with_replacement(range(dim), n):
            if rng.random() > density:
                continue
            tensor[idx] = {
                out: ring.scalar(Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
                for out in range(dim) if rng.random() < density}
        mu[n] = tensor
    return CohFTAlgebra(ring, tuple(f"e{i}" for i in range(dim)), mu)


def random_flat_morphism(seed, ring, dim_v, dim_w, max_arity=3, density=0.8):
    rng = random.Random(seed)
    phi = {}
    for n in range(1, max_arity + 1):
        tensor = {}
        for idx in itertools.combinations_with_replacement(range(dim_v), n):
            if rng.random() > density:
                continue
            tensor[idx] = {
                out: ring.scalar(Fraction(rng.randint(-2, 2), rng.randint(1, 2)))
                for out in range(dim_w) if rng.random() < density}
        phi[n] = tensor
    return Morphism(ring, dim_v, dim_w, phi)


def random_trace(seed, ring, dim, max_arity=4, density=0.8):
    rng = random.Random(seed)
    tau = {}
    for n in range(0, max_arity + 1):
        tensor = {}
        for idx in itertools.combinations_with_replacement(range(dim), n):
            if rng.random() <= density:
                tensor[idx] = ring.scalar(
                    Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
        tau[n] = tensor
    return Trace(ring, dim, tau)
