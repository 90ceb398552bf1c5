"""Fidelity amplitude of perturbed map pairs.

f(t) = <psi| U1^dag(t) U0(t) |psi> for pure initial states, and the maximally
mixed average <f(t)> = Tr[U1^dag(t) U0(t)] / N for the trace variant.  Both
run the two propagations side by side, one kick per step, and record the
overlap after every kick; nothing is recomputed when measures are extracted
later from a stored series.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .maps import MATRIX_GUARD, GuardError, PerturbedPair, drift_phase, kick_phase
from .torus import PhasePoint, TorusState, coherent_state

__all__ = [
    "FidelitySeries",
    "fidelity_from_state",
    "fidelity_pure",
    "fidelity_trace",
    "load_series",
    "save_series",
]


@dataclass(frozen=True)
class FidelitySeries:
    """Complex overlaps f(0..T); f(0) = 1 exactly.

    kind is "pure" (coherent or explicit initial state) or "trace".  The pair
    and the coherent center are carried for labeling and may be absent on
    series read back from disk.
    """

    values: np.ndarray
    kind: str
    pair: PerturbedPair | None = None
    center: PhasePoint | None = None

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=complex)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.kind not in ("pure", "trace"):
            raise ValueError(f"unknown series kind {self.kind!r}")

    @property
    def t_max(self) -> int:
        return self.values.shape[0] - 1

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.values.shape[0])


def _overlap_series(pair: PerturbedPair, start: np.ndarray, t_max: int) -> np.ndarray:
    """Run both propagations from `start` and collect overlaps per kick.

    start has one column per initial state; the returned array has shape
    (t_max + 1, columns) with row 0 pinned to exactly 1.
    """
    kick0, drift0 = kick_phase(pair.u0), drift_phase(pair.u0)
    kick1, drift1 = kick_phase(pair.u1), drift_phase(pair.u1)
    k0, d0 = kick0[:, None], drift0[:, None]
    k1, d1 = kick1[:, None], drift1[:, None]

    a = np.array(start, dtype=complex)
    b = a.copy()
    out = np.empty((t_max + 1, a.shape[1]), dtype=complex)
    out[0] = 1.0
    for t in range(1, t_max + 1):
        a = np.fft.ifft(d0 * np.fft.fft(k0 * a, axis=0, norm="ortho"), axis=0, norm="ortho")
        b = np.fft.ifft(d1 * np.fft.fft(k1 * b, axis=0, norm="ortho"), axis=0, norm="ortho")
        out[t] = np.sum(np.conj(b) * a, axis=0)
    return out


def fidelity_from_state(pair: PerturbedPair, state: TorusState, t_max: int) -> FidelitySeries:
    """Pure-state fidelity series for an arbitrary initial state."""
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    if state.n != pair.n:
        raise ValueError(f"state dimension {state.n} does not match pair {pair.n}")
    values = _overlap_series(pair, state.amps[:, None], t_max)[:, 0]
    return FidelitySeries(values=values, kind="pure", pair=pair)


def fidelity_pure(pair: PerturbedPair, center: PhasePoint, t_max: int) -> FidelitySeries:
    """Fidelity series of the coherent state centered at (q0, p0)."""
    series = fidelity_from_state(pair, coherent_state(pair.n, center), t_max)
    return FidelitySeries(values=series.values, kind="pure", pair=pair, center=center)


def fidelity_trace(pair: PerturbedPair, t_max: int) -> FidelitySeries:
    """Basis-averaged series Tr[U1^dag(t) U0(t)] / N by column evolution."""
    if t_max < 1:
        raise ValueError(f"t_max must be >= 1, got {t_max}")
    n = pair.n
    if n > MATRIX_GUARD:
        raise GuardError(f"N={n} exceeds the dense-matrix guard N<={MATRIX_GUARD}")
    values = _overlap_series(pair, np.eye(n, dtype=complex), t_max).sum(axis=1) / n
    return FidelitySeries(values=values, kind="trace", pair=pair)


def save_series(series: FidelitySeries, path, header: str | None = None) -> None:
    """Write t,re_f,im_f,abs_f rows; floats keep full double precision."""
    lines = []
    if header:
        lines.append(f"# {header}")
    lines.append(f"# kind={series.kind}")
    lines.append("t,re_f,im_f,abs_f")
    for t, v in enumerate(series.values):
        v = complex(v)
        lines.append(f"{t},{v.real!r},{v.imag!r},{abs(v)!r}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_series(path) -> FidelitySeries:
    """Read a series file written by save_series; map labels are not recovered."""
    values = []
    kind = "trace"
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line.startswith("# kind="):
                kind = line.removeprefix("# kind=")
                continue
            if not line or line.startswith("#") or line.startswith("t,"):
                continue
            _, re_f, im_f, _ = line.split(",")
            values.append(complex(float(re_f), float(im_f)))
    return FidelitySeries(values=np.array(values, dtype=complex), kind=kind)
