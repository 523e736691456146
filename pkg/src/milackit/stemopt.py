"""Closed-form synthesis of capacity-achieving analog networks.

Given the truncated singular-vector factor of a channel, these routines build
the real symmetric susceptance matrix of a lossless reciprocal network whose
scattering matrix maps the stream ports onto that factor exactly. Two
architectures are supported:

    - stem: sparse center-graph architecture; block-by-block closed form
      (diagonal leaf couplings from small square solves, the central core from
      the tall symmetric-equation solver, remaining blocks by substitution).
    - fully: dense architecture; one shot of the general symmetric
      linear-matrix-equation solver on the stacked real reformulation.

Both reduce the design to symmetric solutions of real linear matrix equations
AX = C, solved here via SVD: with A = U [S, 0; 0, 0] V^T, a symmetric solution
exists iff A C^T = C A^T and the rows of C outside the range of A vanish; the
minimal-norm representative is

    X = V1 S^-1 U1^T C + V2 V2^T C^T U1 S^-1 V1^T.

Port layout convention (matching the graph module): at the transmitter the
first n_streams ports are inputs and the remaining n_tx ports are outputs; at
the receiver the first n_rx ports are inputs and the last n_streams ports are
outputs. Target matrices are indexed by antenna rows and stream columns.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .archgraph import (
    ArchitectureMask,
    mask_from_graph,
    mask_membership,
    rx_stem_graph,
    tx_stem_graph,
)
from .fileio import save_matrix_csv
from .netcore import (
    DEFAULT_Y0,
    IllConditionedError,
    SusceptanceMatrix,
    scattering_from_admittance,
)

__all__ = [
    "NoSymmetricSolutionError",
    "DegenerateTargetError",
    "DegeneratePhaseError",
    "SolvabilityReport",
    "VerificationReport",
    "SynthesisResult",
    "solve_symmetric_lineq_general",
    "solve_symmetric_lineq_tall",
    "optimize_tx_stem",
    "optimize_rx_stem",
    "optimize_tx_fully",
    "optimize_rx_fully",
    "verify_tx",
    "verify_rx",
    "synthesize_tx",
    "synthesize_rx",
]

# Relative rank cutoff for the small square/tall systems: smallest singular
# value below 1e-10 x largest counts as degenerate (keeps amplification inside
# the 1e-8 verification budget).
_RANK_RTOL = 1e-10

# Relative tolerance on the solvability conditions of the symmetric solvers.
_CONSISTENCY_TOL = 1e-8

_SEMI_UNITARY_TOL = 1e-10


class NoSymmetricSolutionError(ValueError):
    """The linear matrix equation admits no symmetric solution."""


class DegenerateTargetError(ValueError):
    """The coefficient matrix of a tall symmetric solve is rank deficient."""


class DegeneratePhaseError(ValueError):
    """A target row's phases make a synthesis subsystem singular.

    Attributes:
        row: 1-based antenna row of the target that failed, or None when the
            leading central block as a whole is rank deficient.
    """

    def __init__(self, message: str, row: int | None = None):
        super().__init__(message)
        self.row = row


@dataclass(frozen=True)
class SolvabilityReport:
    """Residuals of the symmetric-solution existence conditions (relative)."""

    consistency_residual: float
    range_residual: float
    rank: int

    @property
    def solvable(self) -> bool:
        return (
            self.consistency_residual <= _CONSISTENCY_TOL
            and self.range_residual <= _CONSISTENCY_TOL
        )


def _exact_symmetrize(x: np.ndarray) -> np.ndarray:
    # (x + x.T)/2 is exactly symmetric entrywise: IEEE addition commutes.
    return (x + x.T) / 2.0


def solve_symmetric_lineq_general(
    a, c, consistency_tol: float = _CONSISTENCY_TOL
) -> tuple[np.ndarray, SolvabilityReport]:
    """Minimal-norm symmetric solution of A X = C for general real A.

    Args:
        a: Real M x N coefficient matrix.
        c: Real M x N right-hand side.
        consistency_tol: Relative tolerance on the existence conditions
            A C^T = C A^T and U2^T C = 0.

    Returns:
        (x, report): exactly symmetric N x N solution with the free symmetric
        parameter set to zero, and the solvability residuals.

    Raises:
        NoSymmetricSolutionError: If either existence condition fails.
    """
    a = np.asarray(a, dtype=float)
    c = np.asarray(c, dtype=float)
    if a.ndim != 2 or a.shape != c.shape:
        raise ValueError(f"a and c must share a 2-d shape, got {a.shape} and {c.shape}")
    m, n = a.shape
    norm_a = float(np.linalg.norm(a))
    norm_c = float(np.linalg.norm(c))
    cons = float(np.linalg.norm(a @ c.T - c @ a.T))
    cons_rel = cons / max(norm_a * norm_c, np.finfo(float).tiny)
    if n == 0 or norm_a == 0.0:
        # A = 0 solves only C = 0, by any symmetric X; pick zero.
        range_rel = 0.0 if norm_c == 0.0 else 1.0
        report = SolvabilityReport(cons_rel, range_rel, 0)
        if not report.solvable:
            raise NoSymmetricSolutionError(
                f"no symmetric solution: zero coefficient matrix with nonzero "
                f"right-hand side (residual {range_rel:.3e})"
            )
        return np.zeros((n, n)), report
    u, s, vt = np.linalg.svd(a)
    cutoff = max(m, n) * np.finfo(float).eps * s[0]
    rank = int(np.sum(s > cutoff))
    u1 = u[:, :rank]
    u2 = u[:, rank:]
    v1 = vt[:rank].T
    v2 = vt[rank:].T
    range_res = float(np.linalg.norm(u2.T @ c)) if u2.size else 0.0
    range_rel = range_res / max(norm_c, np.finfo(float).tiny)
    report = SolvabilityReport(cons_rel, range_rel, rank)
    if cons_rel > consistency_tol or range_rel > consistency_tol:
        raise NoSymmetricSolutionError(
            "no symmetric solution: consistency residual "
            f"{cons_rel:.3e}, range residual {range_rel:.3e} "
            f"(tolerance {consistency_tol:.1e})"
        )
    pinv_c = v1 @ ((u1.T @ c) / s[:rank, None])
    x = pinv_c
    if v2.size:
        x = x + v2 @ (v2.T @ pinv_c.T)
    return _exact_symmetrize(x), report


def solve_symmetric_lineq_tall(
    a,
    c,
    rank_rtol: float = _RANK_RTOL,
    consistency_tol: float = _CONSISTENCY_TOL,
) -> np.ndarray:
    """Unique symmetric solution of A X = C for (N+1) x N full-column-rank A.

    One extra row over the unknown size makes the symmetric solution unique:
    X = V S^-1 U1^T C.

    Raises:
        DegenerateTargetError: If A is rank deficient (relative cutoff
            rank_rtol on its singular values).
        NoSymmetricSolutionError: If A C^T != C A^T beyond consistency_tol.
    """
    a = np.asarray(a, dtype=float)
    c = np.asarray(c, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] + 1:
        raise ValueError(f"coefficient matrix must be (N+1) x N, got {a.shape}")
    if a.shape != c.shape:
        raise ValueError(f"shape mismatch: a {a.shape}, c {c.shape}")
    n = a.shape[1]
    if n == 0:
        return np.zeros((0, 0))
    u, s, vt = np.linalg.svd(a)
    if s[0] == 0.0 or s[-1] < rank_rtol * s[0]:
        raise DegenerateTargetError(
            f"degenerate target: coefficient matrix is rank deficient "
            f"(singular values {s[-1]:.3e} .. {s[0]:.3e})"
        )
    cons = float(np.linalg.norm(a @ c.T - c @ a.T))
    denom = max(float(np.linalg.norm(a)) * float(np.linalg.norm(c)), np.finfo(float).tiny)
    if cons / denom > consistency_tol:
        raise NoSymmetricSolutionError(
            f"no symmetric solution: A C^T is asymmetric "
            f"(relative residual {cons / denom:.3e})"
        )
    x = vt.T @ ((u[:, :n].T @ c) / s[:, None])
    return _exact_symmetrize(x)


def _validated_target(target, side: str) -> np.ndarray:
    v = np.asarray(target, dtype=complex)
    if v.ndim != 2:
        raise ValueError(f"{side} target must be a 2-d matrix, got shape {v.shape}")
    n, k = v.shape
    if k < 1 or n < k:
        raise ValueError(
            f"{side} target must be tall with >= 1 column, got shape {v.shape}"
        )
    gram_res = float(np.linalg.norm(v.conj().T @ v - np.eye(k)))
    if gram_res > _SEMI_UNITARY_TOL:
        raise ValueError(
            f"{side} target is not semi-unitary: ||target^H target - I|| = {gram_res:.3e}"
        )
    return v


def _dump(dump_dir, name: str, arr) -> None:
    if dump_dir is None:
        return
    path = Path(dump_dir)
    path.mkdir(parents=True, exist_ok=True)
    save_matrix_csv(path / f"{name}.csv", np.atleast_2d(np.asarray(arr)))


def _checked_square_solve(m: np.ndarray, rhs: np.ndarray, row_1based: int) -> np.ndarray:
    # Degeneracy is judged against the target's unit column scale, not
    # sv[0]: a uniformly tiny system (e.g. the 1x1 case at the entry pinned
    # real by phase normalization) is self-consistently "full rank" yet
    # amplifies roundoff past any verification budget.
    sv = np.linalg.svd(m, compute_uv=False)
    if sv[-1] < _RANK_RTOL * max(sv[0], 1.0):
        raise DegeneratePhaseError(
            f"degenerate channel phase: the coupling system for target row "
            f"{row_1based} (1-based antenna index) is singular to working "
            f"precision (singular values {sv[-1]:.3e} .. {sv[0]:.3e})",
            row=row_1based,
        )
    return np.linalg.solve(m, rhs)


def _stem_blocks(re: np.ndarray, im: np.ndarray, y0: float, diag_sign: float):
    """Shared stem core: leaf diagonal, central-leaf coupling, central core.

    Solves, for each leaf antenna row, the square system
    [im_central, im_row] w = re_row and scales w by +-y0; the (k-1)-sized
    central core then comes from the tall symmetric solver.
    """
    k, n_ant = re.shape
    im_central = im[:, : k - 1]
    if k > 1:
        # Same unit-scale degeneracy criterion as the leaf solves.
        sv = np.linalg.svd(im_central, compute_uv=False)
        if sv[-1] < _RANK_RTOL * max(sv[0], 1.0):
            raise DegeneratePhaseError(
                "degenerate channel phase: imaginary parts of the first "
                f"{k - 1} target rows are rank deficient "
                f"(singular values {sv[-1]:.3e} .. {sv[0]:.3e})"
            )
    n_leaf = n_ant - (k - 1)
    diag_vals = np.empty(n_leaf)
    coupling = np.empty((k - 1, n_leaf))
    for t in range(n_leaf):
        row = k - 1 + t
        m = np.concatenate([im_central, im[:, row : row + 1]], axis=1)
        w = _checked_square_solve(m, re[:, row], row + 1)
        coupling[:, t] = diag_sign * y0 * w[:-1]
        diag_vals[t] = diag_sign * y0 * w[-1]
    if k > 1:
        rhs = diag_sign * (y0 * re[:, : k - 1] - diag_sign * im[:, k - 1 :] @ coupling.T)
        core = solve_symmetric_lineq_tall(im_central, rhs)
    else:
        core = np.zeros((0, 0))
    return core, coupling, diag_vals


def _output_order(override: Sequence[int] | None, k: int, n_other: int, lo: int, hi: int,
                  label: str) -> list[int] | None:
    """Validate a central-port override and return 0-based positions within
    the permutable port group, chosen ports first."""
    if override is None:
        return None
    ports = [int(p) for p in override]
    if len(ports) != k - 1:
        raise ValueError(f"{label} must list exactly {k - 1} ports, got {len(ports)}")
    if len(set(ports)) != len(ports):
        raise ValueError(f"{label} has duplicates: {ports}")
    for p in ports:
        if not lo <= p <= hi:
            raise ValueError(f"{label} port {p} outside {lo}..{hi} (1-based)")
    chosen = [p - lo for p in ports]
    rest = [t for t in range(n_other) if t not in set(chosen)]
    return chosen + rest


def _permuted(arr: np.ndarray, positions: list[int]) -> np.ndarray:
    out = np.empty_like(arr)
    out[np.ix_(positions, positions)] = arr
    return out


def optimize_tx_stem(
    target,
    y0: float = DEFAULT_Y0,
    *,
    central_outputs: Sequence[int] | None = None,
    dump_dir: str | os.PathLike | None = None,
) -> SusceptanceMatrix:
    """Stem-architecture susceptance matrix realizing a transmit target.

    Args:
        target: Complex n_tx x n_streams semi-unitary matrix the network's
            output ports must produce from identity excitation of the inputs.
        y0: Reference admittance.
        central_outputs: Optional override of the n_streams - 1 output ports
            (1-based global port labels in n_streams+1 .. n_streams+n_tx)
            joining the inputs in the architecture's center; default is the
            first n_streams - 1 output ports. Handled by permuting ports
            around the canonical construction.
        dump_dir: If given, write each assembly step there as CSV.

    Returns:
        SusceptanceMatrix over n_streams + n_tx ports, exact zeros outside
        the stem mask.

    Raises:
        DegeneratePhaseError: If some leaf system or the central row block is
            singular; rotate the target columns by generic phases and retry
            (see synthesize_tx).
    """
    v = _validated_target(target, "transmit")
    n_tx, k = v.shape
    order = _output_order(central_outputs, k, n_tx, k + 1, k + n_tx, "central_outputs")
    if order is not None:
        inner = optimize_tx_stem(v[order, :], y0, dump_dir=dump_dir)
        full = list(range(k)) + [k + t for t in order]
        return SusceptanceMatrix(_permuted(inner.array, full))
    re = np.ascontiguousarray(v.real.T)
    im = np.ascontiguousarray(v.imag.T)
    core, coupling, diag_vals = _stem_blocks(re, im, y0, diag_sign=1.0)
    _dump(dump_dir, "tx_step1_leaf_diagonal", np.diag(diag_vals))
    _dump(dump_dir, "tx_step2_central_leaf_coupling", coupling)
    _dump(dump_dir, "tx_step3_central_core", core)
    b_out = np.block([[core, coupling], [coupling.T, np.diag(diag_vals)]])
    _dump(dump_dir, "tx_step4_output_block", b_out)
    b_cross = -y0 * im - re @ b_out
    _dump(dump_dir, "tx_step5_cross_block", b_cross)
    b_in = -re @ b_cross.T
    _dump(dump_dir, "tx_step6_input_block", b_in)
    full = np.block([[b_in, b_cross], [b_cross.T, b_out]])
    result = SusceptanceMatrix(full)
    _dump(dump_dir, "tx_final_susceptance", result.array)
    return result


def optimize_rx_stem(
    target,
    y0: float = DEFAULT_Y0,
    *,
    central_inputs: Sequence[int] | None = None,
    dump_dir: str | os.PathLike | None = None,
) -> SusceptanceMatrix:
    """Stem-architecture susceptance matrix realizing a receive target.

    Args:
        target: Complex n_rx x n_streams semi-unitary matrix whose conjugate
            transpose (halved) the network realizes as combiner.
        y0: Reference admittance.
        central_inputs: Optional override of the n_streams - 1 input ports
            (1-based labels in 1 .. n_rx) joining the outputs in the center;
            default is the first n_streams - 1 input ports.
        dump_dir: If given, write each assembly step there as CSV.

    Returns:
        SusceptanceMatrix over n_rx + n_streams ports, exact zeros outside
        the stem mask.
    """
    u = _validated_target(target, "receive")
    n_rx, k = u.shape
    order = _output_order(central_inputs, k, n_rx, 1, n_rx, "central_inputs")
    if order is not None:
        inner = optimize_rx_stem(u[order, :], y0, dump_dir=dump_dir)
        full = order + [n_rx + j for j in range(k)]
        return SusceptanceMatrix(_permuted(inner.array, full))
    re = np.ascontiguousarray(u.real.T)
    im = np.ascontiguousarray(u.imag.T)
    core, coupling, diag_vals = _stem_blocks(re, im, y0, diag_sign=-1.0)
    _dump(dump_dir, "rx_step1_leaf_diagonal", np.diag(diag_vals))
    _dump(dump_dir, "rx_step2_central_leaf_coupling", coupling)
    _dump(dump_dir, "rx_step3_central_core", core)
    b_in = np.block([[core, coupling], [coupling.T, np.diag(diag_vals)]])
    _dump(dump_dir, "rx_step4_input_block", b_in)
    b_cross = y0 * im - re @ b_in
    _dump(dump_dir, "rx_step5_cross_block", b_cross)
    b_out = -re @ b_cross.T
    _dump(dump_dir, "rx_step6_output_block", b_out)
    full = np.block([[b_in, b_cross.T], [b_cross, b_out]])
    result = SusceptanceMatrix(full)
    _dump(dump_dir, "rx_final_susceptance", result.array)
    return result


def optimize_tx_fully(
    target,
    y0: float = DEFAULT_Y0,
    *,
    dump_dir: str | os.PathLike | None = None,
) -> SusceptanceMatrix:
    """Dense-architecture susceptance matrix realizing a transmit target.

    Solves the stacked real reformulation of the scattering condition with the
    general symmetric solver; no sparsity constraint.
    """
    v = _validated_target(target, "transmit")
    n_tx, k = v.shape
    re = v.real.T
    im = v.imag.T
    zero = np.zeros((k, k))
    eye = np.eye(k)
    a = np.block([[zero, -im], [eye, re]])
    c = y0 * np.block([[eye, -re], [zero, -im]])
    x, _ = solve_symmetric_lineq_general(a, c)
    result = SusceptanceMatrix(x)
    _dump(dump_dir, "tx_final_susceptance", result.array)
    return result


def optimize_rx_fully(
    target,
    y0: float = DEFAULT_Y0,
    *,
    dump_dir: str | os.PathLike | None = None,
) -> SusceptanceMatrix:
    """Dense-architecture susceptance matrix realizing a receive target."""
    u = _validated_target(target, "receive")
    n_rx, k = u.shape
    re = u.real.T
    im = u.imag.T
    zero = np.zeros((k, k))
    eye = np.eye(k)
    a = np.block([[im, zero], [re, eye]])
    c = y0 * np.block([[-re, eye], [im, zero]])
    x, _ = solve_symmetric_lineq_general(a, c)
    result = SusceptanceMatrix(x)
    _dump(dump_dir, "rx_final_susceptance", result.array)
    return result


@dataclass(frozen=True)
class VerificationReport:
    """Diagnostic residuals of a synthesized network against its target.

    Attributes:
        side: "tx" or "rx".
        scattering_residual: Frobenius distance between the realized
            scattering columns and the target stack.
        linear_residual: Residual of the equivalent linear (Cayley-free)
            formulation of the same condition.
        constraint_residuals: Per-constraint Frobenius residuals of the four
            real block equations (see verify_tx/verify_rx docstrings).
        symmetry_residuals: Residuals of the three block-symmetry relations.
        mask_ok: All architecture-forbidden entries are zero within mask_tol.
        symmetry_ok: All symmetry residuals within sym_tol.
    """

    side: str
    scattering_residual: float
    linear_residual: float
    constraint_residuals: Mapping[str, float]
    symmetry_residuals: Mapping[str, float]
    mask_ok: bool
    symmetry_ok: bool

    def max_residual(self) -> float:
        vals = [self.scattering_residual, self.linear_residual]
        vals.extend(self.constraint_residuals.values())
        vals.extend(self.symmetry_residuals.values())
        return max(vals)

    def to_text(self) -> str:
        """JSON rendering for reports and the CLI."""
        payload = {
            "side": self.side,
            "scattering_residual": self.scattering_residual,
            "linear_residual": self.linear_residual,
            "constraint_residuals": dict(self.constraint_residuals),
            "symmetry_residuals": dict(self.symmetry_residuals),
            "mask_ok": self.mask_ok,
            "symmetry_ok": self.symmetry_ok,
            "max_residual": self.max_residual(),
        }
        return json.dumps(payload, indent=2, sort_keys=True)


def _scattering_residual(arr: np.ndarray, stack: np.ndarray, cols: slice, y0: float) -> float:
    try:
        theta = scattering_from_admittance(1j * arr, y0)
    except IllConditionedError:
        return math.inf
    return float(np.linalg.norm(theta[:, cols] - stack))


def verify_tx(
    b,
    target,
    y0: float = DEFAULT_Y0,
    *,
    mask: ArchitectureMask | None = None,
    mask_tol: float = 1e-12,
    sym_tol: float = 1e-12,
) -> VerificationReport:
    """Check a transmit-side susceptance matrix against its target.

    Residual keys (blocks indexed input/output, re/im of the target):
        cross_im: im @ B_oi + y0 I           (imag closure of the cross block)
        outer_im: im @ B_oo - y0 re          (imag closure of the output block)
        inner_re: B_ii + re @ B_oi           (real closure of the input block)
        cross_re: B_io + re @ B_oo + y0 im   (real closure of the cross block)
    Symmetry keys: inner, outer (blocks vs own transpose), cross (B_io vs
    B_oi^T). The first two constraint keys and the inner symmetry are not used
    by the construction, so they probe optimality rather than bookkeeping.

    Args:
        b: SusceptanceMatrix or raw square array (n_streams + n_tx ports).
        target: Complex n_tx x n_streams matrix.
        mask: Architecture mask to check sparsity against; defaults to the
            canonical transmit stem mask.
    """
    v = np.asarray(target, dtype=complex)
    n_tx, k = v.shape
    arr = np.asarray(getattr(b, "array", b), dtype=float)
    n_ports = k + n_tx
    if arr.shape != (n_ports, n_ports):
        raise ValueError(f"susceptance shape {arr.shape} != ({n_ports}, {n_ports})")
    if mask is None:
        mask = mask_from_graph(tx_stem_graph(k, n_tx))
    re = v.real.T
    im = v.imag.T
    b_ii = arr[:k, :k]
    b_io = arr[:k, k:]
    b_oi = arr[k:, :k]
    b_oo = arr[k:, k:]
    eye = np.eye(k)
    constraints = {
        "cross_im": float(np.linalg.norm(im @ b_oi + y0 * eye)),
        "outer_im": float(np.linalg.norm(im @ b_oo - y0 * re)),
        "inner_re": float(np.linalg.norm(b_ii + re @ b_oi)),
        "cross_re": float(np.linalg.norm(b_io + re @ b_oo + y0 * im)),
    }
    symmetry = {
        "inner": float(np.linalg.norm(b_ii - b_ii.T)),
        "outer": float(np.linalg.norm(b_oo - b_oo.T)),
        "cross": float(np.linalg.norm(b_io - b_oi.T)),
    }
    stack = np.vstack([np.zeros((k, k), dtype=complex), v])
    jb = 1j * arr
    y0_eye = y0 * np.eye(n_ports)
    lead = np.eye(n_ports, k, dtype=complex)
    linear = float(np.linalg.norm((y0_eye - jb) @ lead - (y0_eye + jb) @ stack))
    scattering = _scattering_residual(arr, stack, slice(0, k), y0)
    return VerificationReport(
        side="tx",
        scattering_residual=scattering,
        linear_residual=linear,
        constraint_residuals=constraints,
        symmetry_residuals=symmetry,
        mask_ok=mask_membership(arr, mask, mask_tol),
        symmetry_ok=max(symmetry.values()) <= sym_tol,
    )


def verify_rx(
    b,
    target,
    y0: float = DEFAULT_Y0,
    *,
    mask: ArchitectureMask | None = None,
    mask_tol: float = 1e-12,
    sym_tol: float = 1e-12,
) -> VerificationReport:
    """Check a receive-side susceptance matrix against its target.

    Residual keys:
        inner_im: im @ B_ii + y0 re          (imag closure of the input block)
        cross_im: im @ B_io - y0 I           (imag closure of the cross block)
        inner_re: re @ B_ii + B_oi - y0 im   (real closure of the input block)
        cross_re: re @ B_io + B_oo           (real closure of the output block)
    The cross_im constraint and the outer symmetry are unused by the
    construction. See verify_tx for the remaining conventions.

    Args:
        b: SusceptanceMatrix or raw square array (n_rx + n_streams ports).
        target: Complex n_rx x n_streams matrix.
    """
    u = np.asarray(target, dtype=complex)
    n_rx, k = u.shape
    arr = np.asarray(getattr(b, "array", b), dtype=float)
    n_ports = n_rx + k
    if arr.shape != (n_ports, n_ports):
        raise ValueError(f"susceptance shape {arr.shape} != ({n_ports}, {n_ports})")
    if mask is None:
        mask = mask_from_graph(rx_stem_graph(k, n_rx))
    re = u.real.T
    im = u.imag.T
    b_ii = arr[:n_rx, :n_rx]
    b_io = arr[:n_rx, n_rx:]
    b_oi = arr[n_rx:, :n_rx]
    b_oo = arr[n_rx:, n_rx:]
    eye = np.eye(k)
    constraints = {
        "inner_im": float(np.linalg.norm(im @ b_ii + y0 * re)),
        "cross_im": float(np.linalg.norm(im @ b_io - y0 * eye)),
        "inner_re": float(np.linalg.norm(re @ b_ii + b_oi - y0 * im)),
        "cross_re": float(np.linalg.norm(re @ b_io + b_oo)),
    }
    symmetry = {
        "inner": float(np.linalg.norm(b_ii - b_ii.T)),
        "outer": float(np.linalg.norm(b_oo - b_oo.T)),
        "cross": float(np.linalg.norm(b_io - b_oi.T)),
    }
    stack = np.vstack([u.conj(), np.zeros((k, k), dtype=complex)])
    jb = 1j * arr
    y0_eye = y0 * np.eye(n_ports)
    trail = np.zeros((n_ports, k), dtype=complex)
    trail[n_rx:, :] = np.eye(k)
    linear = float(np.linalg.norm((y0_eye - jb) @ trail - (y0_eye + jb) @ stack))
    scattering = _scattering_residual(arr, stack, slice(n_rx, n_ports), y0)
    return VerificationReport(
        side="rx",
        scattering_residual=scattering,
        linear_residual=linear,
        constraint_residuals=constraints,
        symmetry_residuals=symmetry,
        mask_ok=mask_membership(arr, mask, mask_tol),
        symmetry_ok=max(symmetry.values()) <= sym_tol,
    )


@dataclass(frozen=True)
class SynthesisResult:
    """Outcome of a synthesis attempt, possibly after phase regularization.

    Attributes:
        susceptance: The synthesized network state.
        target: The (possibly column-phase-rotated) target actually realized;
            use this, not the original, for verification and extraction.
        phases: Applied per-column phase angles, or None on the raw attempt.
        attempts: Number of attempts consumed (1 = raw target succeeded).
    """

    susceptance: SusceptanceMatrix
    target: np.ndarray
    phases: np.ndarray | None
    attempts: int


_MAX_RETRIES = 3

_RECOVERABLE = (
    DegeneratePhaseError,
    DegenerateTargetError,
    NoSymmetricSolutionError,
    IllConditionedError,
)


def _synthesize(side: str, architecture: str, target, y0, seed, dump_dir) -> SynthesisResult:
    ops = {
        ("tx", "stem"): optimize_tx_stem,
        ("tx", "fully"): optimize_tx_fully,
        ("rx", "stem"): optimize_rx_stem,
        ("rx", "fully"): optimize_rx_fully,
    }
    try:
        op = ops[(side, architecture)]
    except KeyError:
        raise ValueError(f"unknown architecture {architecture!r}; use 'stem' or 'fully'")
    v = np.asarray(target, dtype=complex)
    k = v.shape[1] if v.ndim == 2 else 0
    last_err: Exception | None = None
    for attempt in range(1 + _MAX_RETRIES):
        if attempt == 0:
            current, phases = v, None
        else:
            rng = np.random.default_rng((int(seed) & (2**64 - 1), attempt))
            phases = rng.uniform(0.0, 2.0 * np.pi, size=k)
            current = v * np.exp(1j * phases)[None, :]
        try:
            b = op(current, y0, dump_dir=dump_dir)
        except _RECOVERABLE as exc:
            last_err = exc
            continue
        return SynthesisResult(b, current, phases, attempt + 1)
    assert last_err is not None
    raise last_err


def synthesize_tx(
    target,
    y0: float = DEFAULT_Y0,
    architecture: str = "stem",
    seed: int = 0,
    *,
    dump_dir: str | os.PathLike | None = None,
) -> SynthesisResult:
    """Transmit synthesis with deterministic phase regularization.

    Runs the requested optimizer on the raw target; on degeneracy, rotates
    each target column by a seed-derived random phase (rate-invariant) and
    retries, up to 3 times. Raises the last optimizer error if all attempts
    fail.
    """
    return _synthesize("tx", architecture, target, y0, seed, dump_dir)


def synthesize_rx(
    target,
    y0: float = DEFAULT_Y0,
    architecture: str = "stem",
    seed: int = 0,
    *,
    dump_dir: str | os.PathLike | None = None,
) -> SynthesisResult:
    """Receive synthesis with deterministic phase regularization."""
    return _synthesize("rx", architecture, target, y0, seed, dump_dir)
