"""Multiport network algebra for tunable admittance circuits.

Covers assembly of the port admittance matrix from component values, the
Cayley-type map between admittance and scattering representations, extraction
of the precoding/combining blocks realized by a network, and the
lossless-reciprocal sanity checks (unitary, symmetric scattering).

Conventions:
    - Component maps use 1-based port pairs, matching the graph module;
      (n, n) is the grounding component at port n.
    - Matrices are plain numpy arrays, 0-indexed.
    - y0 is the reference admittance of the scattering representation,
      defaulting to 1/50 S (50 ohm systems).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

__all__ = [
    "DEFAULT_Y0",
    "IllConditionedError",
    "SusceptanceMatrix",
    "LosslessReport",
    "assemble_admittance",
    "lossless_admittance",
    "scattering_from_admittance",
    "admittance_from_scattering",
    "precoder_from_admittance",
    "combiner_from_admittance",
    "check_lossless_reciprocal",
]

DEFAULT_Y0 = 1.0 / 50.0

# Above this estimated condition number the Cayley-map inversions return
# garbage silently, so they raise instead.
_COND_LIMIT = 1e12


class IllConditionedError(ValueError):
    """Raised when a matrix inversion exceeds the conditioning budget."""

    def __init__(self, message: str, cond: float):
        super().__init__(message)
        self.cond = cond


class SusceptanceMatrix:
    """Real symmetric susceptance matrix with structurally enforced symmetry.

    The lower triangle is always an exact mirror of the upper triangle, so
    symmetry cannot drift during block assembly and structural zeros written
    into the upper triangle stay exact. The wrapped array is read-only.

    Args:
        entries: Square real matrix; its upper triangle is authoritative.
        atol: Maximum tolerated asymmetry of the input, absolute, scaled by
            max(1, max|entry|). Exceeding it raises ValueError.
    """

    __slots__ = ("_b", "_input_asymmetry")

    def __init__(self, entries, atol: float = 1e-8):
        a = np.asarray(entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError(f"susceptance matrix must be square, got shape {a.shape}")
        if a.size and not np.all(np.isfinite(a)):
            raise ValueError("susceptance matrix has non-finite entries")
        asym = 0.0
        if a.size:
            asym = float(np.max(np.abs(a - a.T)))
            scale = max(1.0, float(np.max(np.abs(a))))
            if asym > atol * scale:
                raise ValueError(
                    f"input asymmetry {asym:.3e} exceeds tolerance {atol * scale:.3e}"
                )
        b = np.triu(a) + np.triu(a, 1).T
        b.flags.writeable = False
        self._b = b
        self._input_asymmetry = asym

    @classmethod
    def zeros(cls, n_ports: int) -> "SusceptanceMatrix":
        return cls(np.zeros((n_ports, n_ports)))

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the symmetric matrix (siemens)."""
        return self._b

    @property
    def n_ports(self) -> int:
        return self._b.shape[0]

    @property
    def input_asymmetry(self) -> float:
        """Max |a - a.T| of the entries as supplied, before symmetrization.

        Zero for matrices built from already-symmetric data; for optimizer
        outputs it measures how symmetric the assembled blocks came out on
        their own, which some of them are never forced to be.
        """
        return self._input_asymmetry

    def __array__(self, dtype=None, copy=None):
        if dtype is None:
            return self._b.copy() if copy else self._b
        return self._b.astype(dtype)

    def __repr__(self) -> str:
        return f"SusceptanceMatrix(n_ports={self.n_ports})"


def _as_square_complex(a, name: str) -> np.ndarray:
    arr = np.asarray(a, dtype=complex)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be a square matrix, got shape {arr.shape}")
    return arr


def _solve_guarded(m: np.ndarray, rhs: np.ndarray, what: str) -> np.ndarray:
    cond = float(np.linalg.cond(m)) if m.size else 1.0
    if not np.isfinite(cond) or cond > _COND_LIMIT:
        raise IllConditionedError(
            f"{what}: estimated condition number {cond:.3e} exceeds {_COND_LIMIT:.0e}",
            cond,
        )
    return np.linalg.solve(m, rhs)


def assemble_admittance(
    components: Mapping[tuple[int, int], complex], n_ports: int
) -> np.ndarray:
    """Assemble the port admittance matrix from component admittances.

    Each off-diagonal component y between ports m and n contributes -y to
    entries (m, n)/(n, m) and +y to both diagonal entries; a grounding
    component (n, n) adds to the diagonal only. Missing components are open
    circuits.

    Args:
        components: Map from 1-based port pair to component admittance. Give
            each unordered pair once; (m, n) and (n, m) together raise.
        n_ports: Size of the network.

    Returns:
        Complex n_ports x n_ports admittance matrix (siemens).
    """
    if n_ports < 1:
        raise ValueError(f"n_ports must be >= 1, got {n_ports}")
    y = np.zeros((n_ports, n_ports), dtype=complex)
    seen: set[tuple[int, int]] = set()
    for (m, n), val in components.items():
        if not (1 <= m <= n_ports and 1 <= n <= n_ports):
            raise ValueError(f"component ({m}, {n}) outside port range 1..{n_ports}")
        key = (m, n) if m <= n else (n, m)
        if key in seen:
            raise ValueError(f"component for port pair {key} given twice")
        seen.add(key)
        v = complex(val)
        if m == n:
            y[m - 1, m - 1] += v
        else:
            y[m - 1, n - 1] -= v
            y[n - 1, m - 1] -= v
            y[m - 1, m - 1] += v
            y[n - 1, n - 1] += v
    return y


def lossless_admittance(b) -> np.ndarray:
    """Admittance of a lossless reciprocal network: purely imaginary, j*b."""
    arr = np.asarray(getattr(b, "array", b), dtype=float)
    return 1j * arr


def scattering_from_admittance(y, y0: float = DEFAULT_Y0) -> np.ndarray:
    """Scattering matrix of a network with admittance matrix y.

    Computes (y0 I + Y)^-1 (y0 I - Y). For purely imaginary symmetric Y the
    result is unitary and symmetric.
    """
    arr = _as_square_complex(y, "admittance")
    eye = y0 * np.eye(arr.shape[0])
    return _solve_guarded(eye + arr, eye - arr, "scattering_from_admittance")


def admittance_from_scattering(theta, y0: float = DEFAULT_Y0) -> np.ndarray:
    """Inverse map of scattering_from_admittance: Y = y0 (I - S)(I + S)^-1."""
    arr = _as_square_complex(theta, "scattering")
    eye = np.eye(arr.shape[0])
    # (I - S)(I + S)^-1 computed through the transposed solve to keep one
    # guarded code path: X (I+S) = (I-S)  =>  (I+S)^T X^T = (I-S)^T.
    xt = _solve_guarded((eye + arr).T, (eye - arr).T, "admittance_from_scattering")
    return y0 * xt.T


def precoder_from_admittance(
    y, n_streams: int, n_tx: int, y0: float = DEFAULT_Y0
) -> np.ndarray:
    """Precoding block realized by a transmit-side network.

    The network has n_streams input ports followed by n_tx output ports; the
    precoder is the output-rows/input-columns block of (Y/y0 + I)^-1.

    Returns:
        Complex n_tx x n_streams matrix.
    """
    arr = _as_square_complex(y, "admittance")
    n_ports = n_streams + n_tx
    if arr.shape[0] != n_ports:
        raise ValueError(
            f"admittance is {arr.shape[0]}x{arr.shape[0]}, expected "
            f"n_streams + n_tx = {n_ports}"
        )
    rhs = np.eye(n_ports, n_streams, dtype=complex)
    cols = _solve_guarded(arr / y0 + np.eye(n_ports), rhs, "precoder_from_admittance")
    return cols[n_streams:, :]


def combiner_from_admittance(
    y, n_streams: int, n_rx: int, y0: float = DEFAULT_Y0
) -> np.ndarray:
    """Combining block realized by a receive-side network.

    The network has n_rx input ports followed by n_streams output ports; the
    combiner is the output-rows/input-columns block of (Y/y0 + I)^-1.

    Returns:
        Complex n_streams x n_rx matrix.
    """
    arr = _as_square_complex(y, "admittance")
    n_ports = n_rx + n_streams
    if arr.shape[0] != n_ports:
        raise ValueError(
            f"admittance is {arr.shape[0]}x{arr.shape[0]}, expected "
            f"n_rx + n_streams = {n_ports}"
        )
    rhs = np.eye(n_ports, n_rx, dtype=complex)
    cols = _solve_guarded(arr / y0 + np.eye(n_ports), rhs, "combiner_from_admittance")
    return cols[n_rx:, :]


@dataclass(frozen=True)
class LosslessReport:
    """Residuals of the lossless-reciprocal scattering properties."""

    unitarity_residual: float
    symmetry_residual: float
    tol: float

    @property
    def ok(self) -> bool:
        return self.unitarity_residual <= self.tol and self.symmetry_residual <= self.tol


def check_lossless_reciprocal(theta, tol: float = 1e-9) -> LosslessReport:
    """Frobenius residuals of unitarity (S^H S = I) and symmetry (S = S^T)."""
    arr = _as_square_complex(theta, "scattering")
    eye = np.eye(arr.shape[0])
    unit = float(np.linalg.norm(arr.conj().T @ arr - eye))
    symm = float(np.linalg.norm(arr - arr.T))
    return LosslessReport(unit, symm, tol)
