"""Flavor-symmetry application layer: generator bases, meson field matrices,
chiral/axial transformation checks, the anomalous two-multiplet Lagrangian,
its vertex expansion, and the Lorentz-contracted mixed discriminant.

Conventions: N_f x N_f Hermitian generators t^0..t^(N^2-1) normalized to
Tr(t^a t^b) = delta^{ab}/2 with t^0 = 1/sqrt(2 N_f); field matrices
A_k = (1/sqrt(2)) sum_a (s_k^a + i p_k^a) t^a; metric signature (+,-,-,-).
"""

from __future__ import annotations

import cmath
import itertools
import json
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .engines import polydet
from .matrices import as_matrix, det, identity

__all__ = [
    "GeneratorBasis",
    "Multiplet",
    "FieldConfiguration",
    "Couplings",
    "LorentzIndexedFamily",
    "build_generators",
    "assemble_field_matrix",
    "project_field_matrix",
    "chiral_transform",
    "axial_phase_law",
    "check_invariance",
    "InvarianceReport",
    "lagrangian_value",
    "evaluate_field_polynomial",
    "verify_field_expansion",
    "FieldExpansionReport",
    "lorentz_contracted_polydet",
    "boost_matrix",
    "transform_family",
    "enumerate_vertices",
    "field_config_from_json",
    "couplings_from_json",
]

UNITARY_TOL = 1e-8

#: Minkowski metric, signature (+,-,-,-)
METRIC = np.diag([1.0, -1.0, -1.0, -1.0])


@dataclass(frozen=True)
class GeneratorBasis:
    n: int
    generators: tuple[np.ndarray, ...]  # t^0 first, then the traceless ones


class Multiplet(NamedTuple):
    s: np.ndarray  # scalar components, length n^2
    p: np.ndarray  # pseudoscalar components, length n^2


@dataclass(frozen=True)
class FieldConfiguration:
    n: int
    multiplets: tuple[Multiplet, ...]


@dataclass(frozen=True)
class Couplings:
    c1: complex
    c2: complex
    c3: complex
    c4: complex
    f0: float


def build_generators(n: int) -> GeneratorBasis:
    """Generalized Gell-Mann basis for 2 <= n <= 5.

    Built per block k = 2..n: the symmetric and antisymmetric pair matrices
    (j, k) for j < k, then the k-th diagonal generator; this reproduces the
    conventional n=3 ordering (so index 3 and 8 are the diagonal ones).
    All are halved to satisfy Tr(t^a t^b) = delta^{ab}/2, and
    t^0 = 1/sqrt(2n) is prepended.
    """
    if not 2 <= n <= 5:
        raise ValueError(f"generator basis supported for 2 <= n <= 5, got {n}")
    mats = [identity(n) / math.sqrt(2 * n)]
    for k in range(2, n + 1):
        for j in range(1, k):
            sym = np.zeros((n, n), dtype=np.complex128)
            sym[j - 1, k - 1] = sym[k - 1, j - 1] = 0.5
            mats.append(sym)
            asym = np.zeros((n, n), dtype=np.complex128)
            asym[j - 1, k - 1] = -0.5j
            asym[k - 1, j - 1] = 0.5j
            mats.append(asym)
        diag = np.zeros((n, n), dtype=np.complex128)
        for i in range(k - 1):
            diag[i, i] = 1.0
        diag[k - 1, k - 1] = -(k - 1)
        diag *= 1.0 / math.sqrt(2.0 * k * (k - 1))
        mats.append(diag)
    return GeneratorBasis(n, tuple(mats))


def assemble_field_matrix(basis: GeneratorBasis, s: Sequence[float], p: Sequence[float]) -> np.ndarray:
    """A = (1/sqrt(2)) sum_a (s^a + i p^a) t^a."""
    n2 = basis.n * basis.n
    s = np.asarray(s, dtype=float)
    p = np.asarray(p, dtype=float)
    if s.shape != (n2,) or p.shape != (n2,):
        raise ValueError(f"component arrays must have length {n2}, got {s.shape} and {p.shape}")
    out = np.zeros((basis.n, basis.n), dtype=np.complex128)
    for a in range(n2):
        out += (s[a] + 1j * p[a]) * basis.generators[a]
    return out / math.sqrt(2.0)


def project_field_matrix(basis: GeneratorBasis, m) -> tuple[np.ndarray, np.ndarray]:
    """Recover (s, p) from a field matrix via Tr(t^a t^b) = delta^{ab}/2."""
    a = as_matrix(m)
    coeffs = np.array(
        [2.0 * math.sqrt(2.0) * complex(np.trace(a @ t)) for t in basis.generators]
    )
    return coeffs.real.copy(), coeffs.imag.copy()


def _require_unitary(u: np.ndarray, name: str) -> None:
    dev = float(np.max(np.abs(u @ u.conj().T - np.eye(u.shape[0]))))
    if dev > UNITARY_TOL:
        raise ValueError(f"{name} is not unitary (max deviation {dev:.3e})")


def chiral_transform(a, u_left, u_right) -> np.ndarray:
    """A -> U_L A U_R^dagger with unitarity enforced on both factors."""
    a = as_matrix(a)
    u_left = as_matrix(u_left, name="u_left")
    u_right = as_matrix(u_right, name="u_right")
    _require_unitary(u_left, "u_left")
    _require_unitary(u_right, "u_right")
    return u_left @ a @ u_right.conj().T


def axial_phase_law(n: int, theta_a: float, matrix_count: int) -> complex:
    """Predicted multiplicative factor of a degree-`matrix_count` term when
    every argument picks up the singlet axial phase exp(-i theta sqrt(2/n))."""
    if n < 2:
        raise ValueError(f"flavor count must be >= 2, got {n}")
    return cmath.exp(-1j * theta_a * math.sqrt(2.0 / n) * matrix_count)


class InvarianceReport(NamedTuple):
    ratio: complex
    su_invariant: bool


def check_invariance(mats: Sequence, u_left, u_right, engine: Optional[str] = None) -> InvarianceReport:
    """Ratio of the mixed discriminant after/before A_k -> U_L A_k U_R^dagger.

    For special-unitary factors the ratio must be 1; in general it equals
    det(U_L) * conj(det(U_R)).  Raises when the base value is too small for
    the ratio to mean anything.
    """
    base = polydet(mats, engine).value
    transformed = [chiral_transform(m, u_left, u_right) for m in mats]
    moved = polydet(transformed, engine).value
    if abs(base) < 1e-12:
        raise ValueError(f"indeterminate ratio: |base value| = {abs(base):.3e}")
    ratio = moved / base
    u_left = as_matrix(u_left)
    u_right = as_matrix(u_right)
    special = abs(det(u_left) - 1) < 1e-9 and abs(det(u_right) - 1) < 1e-9
    return InvarianceReport(ratio, bool(special and abs(ratio - 1) < 1e-9))


def _field_matrices(cfg: FieldConfiguration, basis: GeneratorBasis, f0: float, shifted: bool):
    mats = []
    for i, mult in enumerate(cfg.multiplets):
        a = assemble_field_matrix(basis, mult.s, mult.p)
        if shifted and i == 0:
            a = f0 * basis.generators[0] + a
        mats.append(a)
    return mats


def lagrangian_value(cfg: FieldConfiguration, couplings: Couplings, shifted: bool = False) -> float:
    """Value of the anomalous two-multiplet interaction Lagrangian.

    L = 2 Re[ c1 det A1 + c2 det A2 + c3 eps(A1,A1,A2) + c4 eps(A1,A2,A2) ],
    with A1 shifted by the vacuum value f0 t^0 when requested.
    """
    if cfg.n != 3:
        raise ValueError(f"the Lagrangian layer is fixed at 3 flavors, got n={cfg.n}")
    if len(cfg.multiplets) != 2:
        raise ValueError(f"need exactly 2 multiplets, got {len(cfg.multiplets)}")
    basis = build_generators(3)
    a1, a2 = _field_matrices(cfg, basis, couplings.f0, shifted)
    total = (
        couplings.c1 * det(a1)
        + couplings.c2 * det(a2)
        + couplings.c3 * polydet([a1, a1, a2]).value
        + couplings.c4 * polydet([a1, a2, a2]).value
    )
    return 2.0 * total.real


# --- cubic field expansion of eps(A1, A1, A2) at 3 flavors ----------------
#
# Hard-coded monomial list: ((a, b, c), coefficient) stands for
# coefficient * phi1^a * phi1^b * phi2^c with phi_k^a = s_k^a + i p_k^a.
# The list is exactly proportional to the engine value, with the singlet
# monomial pinned to 4*sqrt(2/3) (phi1^0)^2 phi2^0; the proportionality
# constant recovered by the fit is 96*sqrt(2).

_S23 = math.sqrt(2.0 / 3.0)
_S3 = math.sqrt(3.0)
_S6 = math.sqrt(6.0)

FIELD_EXPANSION_TERMS: tuple[tuple[tuple[int, int, int], float], ...] = tuple(
    [((0, 0, 0), 4.0 * _S23)]
    + [((0, a, a), -4.0 * _S23) for a in range(1, 9)]
    + [((a, a, 0), -4.0 / _S6) for a in range(1, 9)]
    + [((a, a, 8), 4.0 / _S3) for a in (1, 2, 3)]
    + [((a, a, 8), -2.0 / _S3) for a in (4, 5, 6, 7)]
    + [((8, 8, 8), -4.0 / _S3)]
    + [((a, a, 3), 2.0) for a in (4, 5)]
    + [((a, a, 3), -2.0) for a in (6, 7)]
    + [((a, 8, a), 8.0 / _S3) for a in (1, 2, 3)]
    + [((a, 8, a), -4.0 / _S3) for a in (4, 5, 6, 7)]
    + [
        ((1, 4, 6), 4.0),
        ((1, 5, 7), 4.0),
        ((1, 6, 4), 4.0),
        ((1, 7, 5), 4.0),
        ((2, 4, 7), -4.0),
        ((2, 5, 6), 4.0),
        ((2, 6, 5), 4.0),
        ((2, 7, 4), -4.0),
        ((3, 4, 4), 4.0),
        ((3, 5, 5), 4.0),
        ((3, 6, 6), -4.0),
        ((3, 7, 7), -4.0),
        ((4, 6, 1), 4.0),
        ((4, 7, 2), -4.0),
        ((5, 6, 2), 4.0),
        ((5, 7, 1), 4.0),
    ]
)


def evaluate_field_polynomial(phi1: Sequence[complex], phi2: Sequence[complex]) -> complex:
    """The hard-coded cubic polynomial in the complex fields phi_k^a."""
    phi1 = np.asarray(phi1, dtype=np.complex128)
    phi2 = np.asarray(phi2, dtype=np.complex128)
    if phi1.shape != (9,) or phi2.shape != (9,):
        raise ValueError("need 9 complex components per multiplet")
    total = 0.0 + 0.0j
    for (a, b, c), coef in FIELD_EXPANSION_TERMS:
        total += coef * phi1[a] * phi1[b] * phi2[c]
    return total


class FieldExpansionReport(NamedTuple):
    kappa: complex
    max_residual: float
    samples: int


def verify_field_expansion(seed: int, samples: int = 200) -> FieldExpansionReport:
    """Fit P = kappa * eps(A1, A1, A2) over random field configurations.

    P is the hard-coded cubic polynomial; eps is the engine value on the
    assembled matrices.  Returns the least-squares kappa and the largest
    |P - kappa*eps| relative to max|P|.
    """
    if samples < 2:
        raise ValueError("need at least 2 samples")
    basis = build_generators(3)
    rng = np.random.default_rng(seed)
    ps, es = [], []
    for _ in range(samples):
        s1, p1, s2, p2 = (rng.uniform(-1.0, 1.0, 9) for _ in range(4))
        a1 = assemble_field_matrix(basis, s1, p1)
        a2 = assemble_field_matrix(basis, s2, p2)
        ps.append(evaluate_field_polynomial(s1 + 1j * p1, s2 + 1j * p2))
        es.append(polydet([a1, a1, a2]).value)
    p_arr = np.array(ps)
    e_arr = np.array(es)
    denom = float(np.sum(np.abs(e_arr) ** 2))
    scale = float(np.max(np.abs(p_arr)))
    if denom < 1e-24 or scale == 0.0:
        raise ValueError("degenerate sample set")
    kappa = complex(np.sum(np.conj(e_arr) * p_arr) / denom)
    max_residual = float(np.max(np.abs(p_arr - kappa * e_arr)) / scale)
    return FieldExpansionReport(kappa, max_residual, samples)


# --- Lorentz-indexed families ----------------------------------------------


@dataclass(frozen=True)
class LorentzIndexedFamily:
    rank: int
    components: tuple[np.ndarray, ...]  # 4 (rank 1) or 16, mu-major (rank 2)
    variance: tuple[str, ...]  # "upper" or "lower" per index

    def __post_init__(self):
        if self.rank not in (1, 2):
            raise ValueError(f"rank must be 1 or 2, got {self.rank}")
        if len(self.components) != 4**self.rank:
            raise ValueError(
                f"rank {self.rank} needs {4 ** self.rank} components, got {len(self.components)}"
            )
        if len(self.variance) != self.rank or any(v not in ("upper", "lower") for v in self.variance):
            raise ValueError(f"invalid variance declaration {self.variance}")

    def component(self, mu: int, nu: Optional[int] = None) -> np.ndarray:
        if self.rank == 1:
            return self.components[mu]
        return self.components[4 * mu + nu]


def _flip_variance(fam: LorentzIndexedFamily, index: int) -> LorentzIndexedFamily:
    """Raise or lower one index with the (+,-,-,-) metric (its own inverse)."""
    comps = list(fam.components)
    new = []
    if fam.rank == 1:
        for mu in range(4):
            new.append(sum(METRIC[mu, nu] * comps[nu] for nu in range(4)))
    elif index == 0:
        for mu in range(4):
            for nu in range(4):
                new.append(sum(METRIC[mu, rho] * comps[4 * rho + nu] for rho in range(4)))
    else:
        for mu in range(4):
            for nu in range(4):
                new.append(sum(METRIC[nu, rho] * comps[4 * mu + rho] for rho in range(4)))
    variance = list(fam.variance)
    variance[index] = "upper" if variance[index] == "lower" else "lower"
    return LorentzIndexedFamily(fam.rank, tuple(new), tuple(variance))


def with_variance(fam: LorentzIndexedFamily, variance: Sequence[str]) -> LorentzIndexedFamily:
    """Metric-convert a family to the requested index positions."""
    variance = tuple(variance)
    if len(variance) != fam.rank:
        raise ValueError(f"variance {variance} does not match rank {fam.rank}")
    out = fam
    for i, want in enumerate(variance):
        if out.variance[i] != want:
            out = _flip_variance(out, i)
    return out


def lorentz_contracted_polydet(vector: LorentzIndexedFamily, tensor: LorentzIndexedFamily) -> complex:
    """sum_{mu,nu} eps(V_mu, V_nu, T^{mu nu}) for 3x3 matrix components.

    Expects the vector family with a lower index and the tensor family with
    two upper indices; families declared otherwise are metric-converted
    before the plain double sum.
    """
    if vector.rank != 1 or tensor.rank != 2:
        raise ValueError(f"need a rank-1 and a rank-2 family, got {vector.rank} and {tensor.rank}")
    if vector.components[0].shape != (3, 3):
        raise ValueError("components must be 3x3 matrices")
    v = with_variance(vector, ("lower",))
    t = with_variance(tensor, ("upper", "upper"))
    total = 0.0 + 0.0j
    for mu in range(4):
        for nu in range(4):
            total += polydet([v.component(mu), v.component(nu), t.component(mu, nu)]).value
    return total


def boost_matrix(rapidity: float, axis: int = 1) -> np.ndarray:
    """Pure boost along a spatial axis, acting on upper indices."""
    if axis not in (1, 2, 3):
        raise ValueError(f"axis must be 1, 2 or 3, got {axis}")
    lam = np.eye(4)
    ch, sh = math.cosh(rapidity), math.sinh(rapidity)
    lam[0, 0] = lam[axis, axis] = ch
    lam[0, axis] = lam[axis, 0] = -sh
    return lam


def transform_family(fam: LorentzIndexedFamily, lam: np.ndarray) -> LorentzIndexedFamily:
    """Apply a Lorentz transformation; lower indices use g Lam g."""
    lam = np.asarray(lam, dtype=float)
    lowered = METRIC @ lam @ METRIC
    mats = [lam if v == "upper" else lowered for v in fam.variance]
    new = []
    if fam.rank == 1:
        for mu in range(4):
            new.append(sum(mats[0][mu, al] * fam.components[al] for al in range(4)))
    else:
        for mu in range(4):
            for nu in range(4):
                acc = np.zeros_like(fam.components[0])
                for al in range(4):
                    for be in range(4):
                        w = mats[0][mu, al] * mats[1][nu, be]
                        if w != 0.0:
                            acc = acc + w * fam.components[4 * al + be]
                new.append(acc)
    return LorentzIndexedFamily(fam.rank, tuple(new), fam.variance)


# --- vertex enumeration -----------------------------------------------------


@lru_cache(maxsize=1)
def _eps3_table() -> np.ndarray:
    """eps(t^a, t^b, t^c) over the 3-flavor basis, all 9^3 combinations."""
    ts = build_generators(3).generators
    table = np.zeros((9, 9, 9), dtype=np.complex128)
    for a in range(9):
        for b in range(a, 9):
            for c in range(9):
                v = polydet([ts[a], ts[b], ts[c]]).value
                table[a, b, c] = v
                table[b, a, c] = v
    return table


FieldSymbol = tuple[str, int, int]  # (kind "s"|"p", multiplet 1|2, generator index)


def enumerate_vertices(couplings: Couplings, tol: float = 1e-10) -> list[tuple[tuple[FieldSymbol, ...], float]]:
    """Exact expansion of the shifted Lagrangian into real-field monomials.

    Expands each of the four interaction structures multilinearly over the
    generator basis with A1 = f0 t^0 + fields, applies the +h.c. (twice the
    real part), and merges; returns [(monomial, coefficient), ...] sorted by
    degree then monomial, keeping coefficients with |c| > tol * scale.
    """
    eps3 = _eps3_table()
    inv_sqrt2 = 1.0 / math.sqrt(2.0)

    # slot sources: (coefficient, generator index, complex-field symbol or None)
    def sources(multiplet: int):
        out = []
        if multiplet == 1 and couplings.f0 != 0.0:
            out.append((complex(couplings.f0), 0, None))
        out.extend((complex(inv_sqrt2), a, (multiplet, a)) for a in range(9))
        return out

    structures = (
        (couplings.c1, (1, 1, 1)),
        (couplings.c2, (2, 2, 2)),
        (couplings.c3, (1, 1, 2)),
        (couplings.c4, (1, 2, 2)),
    )
    complex_monomials: dict[tuple, complex] = {}
    for coupling, slots in structures:
        if coupling == 0:
            continue
        slot_sources = [sources(k) for k in slots]
        for choice in itertools.product(*slot_sources):
            weight = coupling
            gens = []
            symbols = []
            for coef, gen, sym in choice:
                weight *= coef
                gens.append(gen)
                if sym is not None:
                    symbols.append(sym)
            value = eps3[gens[0], gens[1], gens[2]]
            if value == 0:
                continue
            key = tuple(sorted(symbols))
            complex_monomials[key] = complex_monomials.get(key, 0.0) + weight * value

    real_monomials: dict[tuple[FieldSymbol, ...], float] = {}
    for symbols, z in complex_monomials.items():
        for kinds in itertools.product("sp", repeat=len(symbols)):
            factor = z * (1j) ** kinds.count("p")
            coef = 2.0 * factor.real
            if coef == 0.0:
                continue
            key = tuple(sorted((kd, k, a) for kd, (k, a) in zip(kinds, symbols)))
            real_monomials[key] = real_monomials.get(key, 0.0) + coef

    scale = max(
        [abs(c) for c in (couplings.c1, couplings.c2, couplings.c3, couplings.c4)]
        + [1e-300]
    ) * max(1.0, abs(couplings.f0)) ** 2
    out = [
        (mono, coef)
        for mono, coef in real_monomials.items()
        if abs(coef) > tol * scale
    ]
    out.sort(key=lambda item: (len(item[0]), item[0]))
    return out


# --- JSON interfaces ---------------------------------------------------------


def field_config_from_json(obj) -> FieldConfiguration:
    """Parse {"n": 3, "multiplets": [{"s": [...], "p": [...]}, ...]}."""
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or "n" not in obj or "multiplets" not in obj:
        raise ValueError('field configuration JSON needs "n" and "multiplets"')
    n = int(obj["n"])
    multiplets = []
    for i, entry in enumerate(obj["multiplets"]):
        s = np.asarray(entry.get("s", [0.0] * n * n), dtype=float)
        p = np.asarray(entry.get("p", [0.0] * n * n), dtype=float)
        if s.shape != (n * n,) or p.shape != (n * n,):
            raise ValueError(f"multiplet {i} components must have length {n * n}")
        if not (np.all(np.isfinite(s)) and np.all(np.isfinite(p))):
            raise ValueError(f"multiplet {i} contains non-finite components")
        multiplets.append(Multiplet(s, p))
    return FieldConfiguration(n, tuple(multiplets))


def _as_complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(float(re), float(im))
    return complex(float(value), 0.0)


def couplings_from_json(obj) -> Couplings:
    """Parse {"c1": [re, im], ..., "f0": x}; bare numbers mean real couplings."""
    if isinstance(obj, (str, bytes)):
        obj = json.loads(obj)
    try:
        return Couplings(
            c1=_as_complex(obj["c1"]),
            c2=_as_complex(obj["c2"]),
            c3=_as_complex(obj["c3"]),
            c4=_as_complex(obj["c4"]),
            f0=float(obj["f0"]),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"invalid couplings JSON: {exc}") from exc
