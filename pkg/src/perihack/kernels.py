"""Backend selection for the dice-resolution kernel.

Imports the compiled extension when present, otherwise the pure-Python twin.
Set PERIHACK_PURE=1 to force the fallback (used by the parity tests and the
benchmark). `perihack.kernels.BACKEND` reports which one is active.
"""

from __future__ import annotations

import os

if os.environ.get("PERIHACK_PURE"):
    from . import _resolution_py as _impl
else:
    try:
        from . import _resolution as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _resolution_py as _impl

BACKEND: str = _impl.BACKEND

winning_faces = _impl.winning_faces
success_probability = _impl.success_probability
probability_grid = _impl.probability_grid


def simulate_successes(
    attack_bonus: int, defense_bonus: int, repeat: int, n: int, seed: int
) -> int:
    return _impl.simulate_successes(
        attack_bonus, defense_bonus, repeat, n, seed & 0xFFFFFFFFFFFFFFFF
    )

__all__ = [
    "BACKEND",
    "winning_faces",
    "success_probability",
    "simulate_successes",
    "probability_grid",
]
