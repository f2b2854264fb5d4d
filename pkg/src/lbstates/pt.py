"""The chemical-potential system: spectra, biorthonormal eigenfamilies,
non-standard ladder operators and the factorization of the shifted
Hamiltonian.

For strength V the Hamiltonian block is (2i v_F / xi) [[V, a^+], [-a, -V]],
not self-adjoint for V != 0.  Levels |p| < V^2 are PT-broken (complex
conjugate eigenvalue pairs), |p| > V^2 unbroken (real eigenvalues), and
|p| = V^2 is an exceptional point where the two eigenvectors coalesce and
every construction below refuses to proceed.

Eigenvectors for level p >= 1 are, on the spinor register,

    phi_p^{+-}  = K_phi^{+-} (e_p,  alpha^{+-} e_{p-1})
    psi_p^{+-}  = K_psi^{+-} (e_p, -alpha^{-+} e_{p-1})

with alpha^{+-} = (-V -+ i sqrt(p - V^2)) / sqrt(p) (principal root).  For
V > 1 the dual family is re-paired on broken levels (psi-tilde), restoring
biorthonormality of the x/y pairing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ContractError, ExceptionalPointError
from .fock import FockCutoff, SparseOperator
from .ladders import LadderKind, level_ladder_matrix
from .params import PhysicalParams, level_discriminant, sqrt_discriminant
from .spinor import (
    ModeIndex,
    SpinorState,
    apply_spinor_operator,
    first_register_basis,
    hamiltonian_spinor_matrix,
)


def alpha(p: int, V: float, branch: str) -> complex:
    """Spinor mixing coefficient of level p >= 1.

    Unimodular for p > V^2; real with |alpha^+||alpha^-| = 1 in the broken
    region; exactly -V/sqrt(p) = -1 at the exceptional point (the
    discriminant is snapped to zero within tolerance).
    """
    if p < 1:
        raise ContractError("alpha is defined for p >= 1")
    sign = {"plus": -1.0, "minus": +1.0}[branch]
    s = sqrt_discriminant(p, V)
    return complex((-V + sign * 1j * s) / math.sqrt(p))


def eq39_product(p: int, V: float, branch: str) -> complex:
    """The constrained product conj(K_phi) K_psi = p / (2 (p - V^2 +- i V
    sqrt(p - V^2))) for the given branch."""
    d = level_discriminant(p, V)
    s = sqrt_discriminant(p, V)
    sign = {"plus": +1.0, "minus": -1.0}[branch]
    den = 2.0 * (d + sign * 1j * V * s)
    if den == 0:
        raise ExceptionalPointError("normalization degenerates at p = V^2", p=p, V=V)
    return complex(p / den)


def normalization_K(p: int, params: PhysicalParams, branch: str = "plus") -> tuple:
    """(K_phi, K_psi) for the branch, with the product constraint satisfied
    against the branch's biorthogonal dual.

    Magnitudes are split symmetrically, |K_phi| = |K_psi| = |product|^(1/2)
    (equal to (p/(4(p-V^2)))^(1/4) in the unbroken region); K_psi is chosen
    real positive and K_phi carries the product's phase.  In the broken
    region the dual of phi^{+-} is psi^{-+}, so the branch constants are
    fixed through the re-paired products.
    """
    if p < 1:
        raise ContractError("normalization_K is defined for p >= 1")
    d = level_discriminant(p, params.V)
    if d == 0.0:
        raise ExceptionalPointError(
            f"level p = {p} is exceptional at V = {params.V}", p=p, V=params.V
        )
    if d > 0.0:
        r = eq39_product(p, params.V, branch)
        k_psi = math.sqrt(abs(r))
        k_phi = np.conj(r) / k_psi
        return complex(k_phi), complex(k_psi)
    # broken region: conj(K_phi^+) K_psi^- = eq39(minus) > 0,
    #                conj(K_phi^-) K_psi^+ = eq39(plus) < 0
    r_plus_pair = eq39_product(p, params.V, "minus").real
    r_minus_pair = eq39_product(p, params.V, "plus").real
    if branch == "plus":
        k_phi = math.sqrt(abs(r_plus_pair))
        k_psi = math.sqrt(abs(r_minus_pair))
    else:
        k_phi = -math.sqrt(abs(r_minus_pair))
        k_psi = math.sqrt(abs(r_plus_pair))
    return complex(k_phi), complex(k_psi)


def eigenvalue_E(p: int, params: PhysicalParams) -> complex:
    """eps0 sqrt(p - V^2) for p >= 1 (principal root, imaginary when
    broken); i eps0 V at p = 0; -eps0 sqrt(-p - V^2) for p <= -1."""
    if p == 0:
        return complex(0.0, params.eps0 * params.V)
    if p >= 1:
        return params.eps0 * sqrt_discriminant(p, params.V)
    return -params.eps0 * sqrt_discriminant(-p, params.V)


def theta(p: int, params: PhysicalParams) -> complex:
    """Shifted eigenvalue E_p - E_0 (zero at p = 0; modulus eps0 sqrt(|p|)
    whenever the level is unbroken)."""
    if p == 0:
        return 0.0 + 0.0j
    if p >= 1:
        return params.eps0 * (sqrt_discriminant(p, params.V) - 1j * params.V)
    return -params.eps0 * (sqrt_discriminant(-p, params.V) + 1j * params.V)


def is_repaired_level(p_abs: int, params: PhysicalParams) -> bool:
    """True when the dual family at |p| is the swapped branch (V > 1 and
    the level is broken)."""
    return p_abs >= 1 and params.V > 1.0 and level_discriminant(p_abs, params.V) < 0.0


def _two_entry_stack(nmax2: int, idx_upper: int, c_upper: complex,
                     idx_lower: int, c_lower: complex) -> np.ndarray:
    stack = np.zeros(2 * (nmax2 + 1), dtype=complex)
    stack[idx_upper] = c_upper
    if idx_lower >= 0:
        stack[nmax2 + 1 + idx_lower] = c_lower
    return stack


def phi_spinor(p: int, params: PhysicalParams, cutoff: FockCutoff) -> np.ndarray:
    """Stacked (upper, lower) components of phi_p on the spinor register."""
    if abs(p) > cutoff.nmax2:
        raise ContractError(f"|p|={abs(p)} exceeds nmax2={cutoff.nmax2}")
    if p == 0:
        return _two_entry_stack(cutoff.nmax2, 0, 1.0, -1, 0.0)
    q = abs(p)
    branch = "plus" if p > 0 else "minus"
    k_phi, _ = normalization_K(q, params, branch)
    return _two_entry_stack(cutoff.nmax2, q, k_phi, q - 1, k_phi * alpha(q, params.V, branch))


def psi_spinor(p: int, params: PhysicalParams, cutoff: FockCutoff,
               repaired: bool | None = None) -> np.ndarray:
    """Stacked components of psi_p (repaired=True gives the swapped-branch
    dual used for V > 1 on broken levels; default follows the regime)."""
    if abs(p) > cutoff.nmax2:
        raise ContractError(f"|p|={abs(p)} exceeds nmax2={cutoff.nmax2}")
    if p == 0:
        return _two_entry_stack(cutoff.nmax2, 0, 1.0, -1, 0.0)
    q = abs(p)
    branch = "plus" if p > 0 else "minus"
    if repaired is None:
        repaired = is_repaired_level(q, params)
    if repaired and not is_repaired_level(q, params):
        raise ContractError("re-pairing only applies to broken levels at V > 1")
    if repaired:
        branch = "minus" if branch == "plus" else "plus"
    other = "minus" if branch == "plus" else "plus"
    _, k_psi = normalization_K(q, params, branch)
    return _two_entry_stack(cutoff.nmax2, q, k_psi, q - 1, -k_psi * alpha(q, params.V, other))


def dual_spinor(p: int, params: PhysicalParams, cutoff: FockCutoff) -> np.ndarray:
    """The member of the dual family paired with phi_p: psi_p for V < 1,
    psi-tilde_p for V > 1."""
    return psi_spinor(p, params, cutoff, repaired=is_repaired_level(abs(p), params))


@dataclass(frozen=True)
class BiorthVector:
    role: str  # "phi" | "psi" | "psi_tilde"
    index: ModeIndex
    spinor: SpinorState


def build_biorth_pair(idx: ModeIndex, params: PhysicalParams, cutoff: FockCutoff) -> tuple:
    """(x_{n,p}, y_{n,p}) with y drawn from the regime's dual family."""
    n, p = idx
    if abs(p) > cutoff.pmax:
        raise ContractError(f"|p|={abs(p)} exceeds pmax={cutoff.pmax}")
    fr = first_register_basis(n, cutoff.nmax1)
    half = cutoff.nmax2 + 1
    xs = phi_spinor(p, params, cutoff)
    ys = dual_spinor(p, params, cutoff)
    x = BiorthVector("phi", ModeIndex(n, p), SpinorState(fr.copy(), xs[:half], xs[half:]))
    role = "psi_tilde" if params.V > 1.0 else "psi"
    y = BiorthVector(role, ModeIndex(n, p), SpinorState(fr.copy(), ys[:half], ys[half:]))
    return x, y


def biorth_level_matrices(params: PhysicalParams, cutoff: FockCutoff) -> tuple:
    """Column matrices X, Y of phi_p and its dual over p = -pmax..pmax."""
    xs, ys = [], []
    for p in range(-cutoff.pmax, cutoff.pmax + 1):
        xs.append(phi_spinor(p, params, cutoff))
        ys.append(dual_spinor(p, params, cutoff))
    return np.array(xs).T, np.array(ys).T


def apply_HV(state: SpinorState, params: PhysicalParams, cutoff: FockCutoff) -> SpinorState:
    """Apply (2i v_F/xi) [[V, A2^+], [-A2, -V]] blockwise."""
    return apply_spinor_operator(hamiltonian_spinor_matrix(params, cutoff), state)


def hv_adjoint_defect(params: PhysicalParams, cutoff: FockCutoff) -> float:
    """Operator norm of H(V) - H(V)^+, concentrated on the diagonal blocks;
    equals 2 eps0 V and measures the non-self-adjointness."""
    h = hamiltonian_spinor_matrix(params, cutoff).matrix
    diff = (h - h.conjugate().T).toarray()
    return float(np.linalg.norm(diff, ord=2))


_PT_LADDER_NAMES = ("A_K_V", "B_K_V", "c2", "d2")


def pt_level_ladder(name: str, params: PhysicalParams, cutoff: FockCutoff) -> sp.csr_matrix:
    """Ladder matrix in the x/y (level) bases, where all four are bidiagonal.

    A_K_V : sqrt(|p|)   at (p-1, p)     B_K_V : sqrt(|p+1|) at (p+1, p)
    c2    : sqrt(th_p)  at (p-1, p)     d2    : sqrt(th_{p+1}) at (p+1, p)

    with principal square roots throughout.
    """
    pm = cutoff.pmax
    if name == "A_K_V":
        return level_ladder_matrix(LadderKind.A2, pm)
    if name == "B_K_V":
        return level_ladder_matrix(LadderKind.A2DAG, pm)
    dim = 2 * pm + 1
    rows, cols, vals = [], [], []
    for p in range(-pm, pm + 1):
        if name == "c2":
            q, amp = p - 1, np.sqrt(theta(p, params))
        elif name == "d2":
            q, amp = p + 1, np.sqrt(theta(p + 1, params))
        else:
            raise ContractError(f"unknown ladder {name!r}")
        if abs(q) <= pm and amp != 0:
            rows.append(q + pm)
            cols.append(p + pm)
            vals.append(amp)
    return sp.csr_matrix((np.asarray(vals, dtype=complex), (rows, cols)), shape=(dim, dim))


def pt_spinor_ladder(name: str, params: PhysicalParams, cutoff: FockCutoff) -> SparseOperator:
    """Spinor-register realization through the biorthogonal rank-one sums,
    sum_p amp(p) |phi_target><dual_p|."""
    params.require_non_exceptional(f"ladder {name}")
    x, y = biorth_level_matrices(params, cutoff)
    pmat = pt_level_ladder(name, params, cutoff)
    mat = sp.csr_matrix(x @ pmat.toarray() @ y.conjugate().T)
    return SparseOperator(mat, "kregister", name)


def build_pt_ladders(params: PhysicalParams, cutoff: FockCutoff,
                     representation: str = "level") -> dict:
    """All four ladders, in the bidiagonal level representation (default) or
    realized on the spinor register ('spinor').  Refuses exceptional V."""
    params.require_non_exceptional("ladder construction")
    if representation == "level":
        return {
            name: SparseOperator(pt_level_ladder(name, params, cutoff), "level", name)
            for name in _PT_LADDER_NAMES
        }
    if representation == "spinor":
        return {name: pt_spinor_ladder(name, params, cutoff) for name in _PT_LADDER_NAMES}
    raise ContractError(f"unknown representation {representation!r}")


def factorization_defect(params: PhysicalParams, cutoff: FockCutoff) -> float:
    """max over interior p of ||(d2 c2 - (H - E_0)) phi_p|| / ||phi_p||.

    d2 c2 is applied through the spinor-register realizations, H through its
    block matrix, so the identity is a cross-check between the rank-one and
    the differential forms.
    """
    params.require_non_exceptional("factorization")
    c2 = pt_spinor_ladder("c2", params, cutoff).matrix
    d2 = pt_spinor_ladder("d2", params, cutoff).matrix
    h = hamiltonian_spinor_matrix(params, cutoff).matrix
    e0 = eigenvalue_E(0, params)
    shifted = h - e0 * sp.identity(h.shape[0], format="csr", dtype=complex)
    worst = 0.0
    for p in range(-cutoff.pmax + 1, cutoff.pmax):
        col = phi_spinor(p, params, cutoff)
        defect = np.linalg.norm(d2 @ (c2 @ col) - shifted @ col) / np.linalg.norm(col)
        worst = max(worst, float(defect))
    return worst


@dataclass(frozen=True)
class LevelClass:
    p: int
    label: str  # "broken" | "unbroken" | "zero_mode" | "exceptional"


def classify_levels(params: PhysicalParams, p_range) -> list:
    """Classify each level: zero mode at p=0, exceptional at |p| = V^2,
    broken for 1 <= |p| < V^2, unbroken beyond."""
    out = []
    v2 = params.V * params.V
    for p in p_range:
        q = abs(p)
        if p == 0:
            label = "zero_mode"
        elif level_discriminant(q, params.V) == 0.0:
            label = "exceptional"
        elif q < v2:
            label = "broken"
        else:
            label = "unbroken"
        out.append(LevelClass(int(p), label))
    return out


def exceptional_diagnostics(p: int, v_star: float, cutoff: FockCutoff) -> dict:
    """Measured coalescence at the exceptional point p = V*^2: distance of
    the unit-normalized branch eigenvectors, the (vanishing) eigenvalue of
    the coincident pair, and the self-orthogonality defect |<phi_p, psi_p>|.
    """
    if abs(v_star * v_star - p) > 1e-9 * max(1.0, p):
        raise ContractError(f"V*^2 = {v_star * v_star} does not match p = {p}")
    params = PhysicalParams(V=v_star)
    a_plus = alpha(p, v_star, "plus")
    a_minus = alpha(p, v_star, "minus")

    def unit(a):
        v = _two_entry_stack(cutoff.nmax2, p, 1.0, p - 1, a)
        return v / np.linalg.norm(v)

    u_plus, u_minus = unit(a_plus), unit(a_minus)
    # duals with the lower sign flipped, as in the psi family
    w_plus, w_minus = unit(-a_minus), unit(-a_plus)
    coincidence = float(np.linalg.norm(u_plus - u_minus))
    self_orth = max(abs(np.vdot(u_plus, w_plus)), abs(np.vdot(u_minus, w_minus)))
    return {
        "p": p,
        "V": v_star,
        "alpha_plus": a_plus,
        "alpha_minus": a_minus,
        "coincidence_defect": coincidence,
        "pair_eigenvalue": eigenvalue_E(p, params),
        "self_orthogonality": float(self_orth),
    }


def gain_loss_asymptotics(p: int, V: float) -> tuple:
    """(|alpha^+_p|, |alpha^-_p|) in the broken region: (V -+ sqrt(V^2-p)) /
    sqrt(p); their product is 1 identically."""
    if not (1 <= p and level_discriminant(p, V) < 0.0):
        raise ContractError("asymptotics are defined for broken levels 1 <= p < V^2")
    root = math.sqrt(V * V - p)
    return (V - root) / math.sqrt(p), (V + root) / math.sqrt(p)


def phi_norm_bound(params: PhysicalParams) -> float:
    """Uniform bound on ||phi_n||^2: 1/(1-V^2) for V < 1; for V > 1 the
    bound ([V^2]+1)/([V^2]+1-V^2) valid on unbroken levels n >= [V^2]+1."""
    if params.regime() == "small":
        return 1.0 / (1.0 - params.V ** 2)
    floor_v2 = math.floor(params.V ** 2)
    return (floor_v2 + 1) / (floor_v2 + 1 - params.V ** 2)
