"""State-independent bounds on the change of log-purity.

Every bound has the form ``|ln P(t_f)/P(t_i)| <= integral of rate(t) dt``
where the rate depends only on the jump operators:

* ``hilbert_hs``: ``4 gamma(t) sum_k ||A_k||_2^2`` (Hilbert-Schmidt norms)
* ``hilbert_sp``: ``4 gamma(t) sum_k ||A_k||_sp^2`` (spectral norms)
* ``liouville``: ``||S - S^dagger||_sp`` of the Liouville superoperator

and ``liouville <= hilbert_sp <= hilbert_hs`` always holds.
"""

import os
from dataclasses import asdict, dataclass
from typing import Optional, Tuple

import numpy as np
from scipy.integrate import cumulative_trapezoid

from .lindblad import LindbladGenerator
from .linalg import commutator, hs_norm, spectral_norm
from .liouville import unit_skew_norm

DEFAULT_QUADRATURE_STEPS = 1000
ORDERING_ATOL = 1e-9
DEPHASING_ATOL = 1e-10
BOUND_KINDS = ("hilbert_hs", "hilbert_sp", "liouville")


class NotDephasingError(ValueError):
    """The generator's jump operators are not normal and mutually commuting."""


def quadrature_steps(steps: Optional[int] = None) -> int:
    if steps is not None:
        return int(steps)
    return int(os.environ.get("QSL_QUADRATURE_STEPS", DEFAULT_QUADRATURE_STEPS))


@dataclass(frozen=True)
class BoundReport:
    interval: Tuple[float, float]
    hilbert_hs: float
    hilbert_sp: float
    liouville: float
    applies_to: str = "purity"
    quadrature_steps: int = DEFAULT_QUADRATURE_STEPS

    @property
    def ordered(self) -> bool:
        return (
            self.liouville <= self.hilbert_sp + ORDERING_ATOL
            and self.hilbert_sp <= self.hilbert_hs + ORDERING_ATOL
        )

    def to_dict(self) -> dict:
        d = asdict(self)
        d["interval"] = list(self.interval)
        d["ordering liouville <= hilbert_sp <= hilbert_hs"] = self.ordered
        return d


def _check_interval(t_i, t_f):
    if t_f < t_i:
        raise ValueError(f"reversed interval: t_f={t_f} < t_i={t_i}")


def integrated_prefactor(gen: LindbladGenerator, t_i: float, t_f: float, steps=None) -> float:
    """Trapezoid integral of ``gamma(t)`` over ``[t_i, t_f]``; exact when constant."""
    _check_interval(t_i, t_f)
    if getattr(gen.prefactor, "is_constant", False):
        return gen.gamma(t_i) * (t_f - t_i)
    t = np.linspace(t_i, t_f, quadrature_steps(steps) + 1)
    return float(np.trapezoid([gen.gamma(x) for x in t], t))


def hs_rate(gen: LindbladGenerator) -> float:
    return 4.0 * sum(hs_norm(a) ** 2 for a in gen.jump_ops)


def sp_rate(gen: LindbladGenerator) -> float:
    return 4.0 * sum(spectral_norm(a) ** 2 for a in gen.jump_ops)


def hilbert_hs_bound(gen: LindbladGenerator, t_i: float, t_f: float, steps=None) -> float:
    return hs_rate(gen) * integrated_prefactor(gen, t_i, t_f, steps)


def hilbert_sp_bound(gen: LindbladGenerator, t_i: float, t_f: float, steps=None) -> float:
    return sp_rate(gen) * integrated_prefactor(gen, t_i, t_f, steps)


def liouville_bound(gen: LindbladGenerator, t_i: float, t_f: float, steps=None) -> float:
    return unit_skew_norm(gen) * integrated_prefactor(gen, t_i, t_f, steps)


def bound_report(gen, t_i, t_f, applies_to="purity", steps=None) -> BoundReport:
    n = quadrature_steps(steps)
    gamma_int = integrated_prefactor(gen, t_i, t_f, n)
    return BoundReport(
        interval=(float(t_i), float(t_f)),
        hilbert_hs=hs_rate(gen) * gamma_int,
        hilbert_sp=sp_rate(gen) * gamma_int,
        liouville=unit_skew_norm(gen) * gamma_int,
        applies_to=applies_to,
        quadrature_steps=n,
    )


def cumulative_bounds(gen: LindbladGenerator, times, steps=None) -> dict:
    """All three bounds integrated from ``times[0]`` to every entry of ``times``.

    ``times`` must be uniformly spaced. Each grid interval is split into
    enough sub-panels that the whole range uses at least ``steps`` panels.
    """
    times = np.asarray(times, dtype=float)
    if getattr(gen.prefactor, "is_constant", False):
        gamma_int = gen.gamma(times[0]) * (times - times[0])
    else:
        intervals = len(times) - 1
        sub = max(1, -(-quadrature_steps(steps) // max(intervals, 1)))
        fine = np.linspace(times[0], times[-1], intervals * sub + 1)
        acc = cumulative_trapezoid([gen.gamma(x) for x in fine], fine, initial=0.0)
        gamma_int = acc[::sub]
    return {
        "hilbert_hs": hs_rate(gen) * gamma_int,
        "hilbert_sp": sp_rate(gen) * gamma_int,
        "liouville": unit_skew_norm(gen) * gamma_int,
    }


def _bound_value(report, which):
    if isinstance(report, BoundReport):
        return getattr(report, which)
    return float(report)


def purity_bound_interval(report, p_i: float, which: str = "liouville"):
    """Allowed purity range ``[P_i e^{-B}, min(1, P_i e^{B})]``."""
    if not 0.0 < p_i <= 1.0 + 1e-12:
        raise ValueError(f"initial purity {p_i} outside (0, 1]")
    b = _bound_value(report, which)
    return p_i * np.exp(-b), min(1.0, p_i * np.exp(b))


def purity_deviation_bound_interval(report, pd_i: float, which: str = "liouville"):
    """Allowed purity-deviation range ``[PD_i e^{-B}, PD_i e^{B}]`` (no cap)."""
    if pd_i < 0:
        raise ValueError(f"negative purity deviation {pd_i}")
    b = _bound_value(report, which)
    return pd_i * np.exp(-b), pd_i * np.exp(b)


def is_dephasing(gen: LindbladGenerator, atol: float = DEPHASING_ATOL) -> bool:
    ops = gen.jump_ops
    for j, a in enumerate(ops):
        if hs_norm(commutator(a, a.conj().T)) >= atol:
            return False
        for b in ops[j + 1:]:
            if hs_norm(commutator(a, b)) >= atol:
                return False
    return True


def dephasing_purity_floor(gen, p_i: float, n: int, t_i: float, t_f: float, steps=None) -> float:
    """Lower purity limit ``1/N + (P_i - 1/N) exp(-liouville_bound)``.

    Valid whenever the maximally mixed state is stationary, which normal,
    mutually commuting jump operators guarantee.
    """
    if not is_dephasing(gen):
        raise NotDephasingError("jump operators must be normal and mutually commuting")
    if p_i < 1.0 / n - 1e-12:
        raise ValueError(f"initial purity {p_i} below 1/N = {1.0 / n}")
    return 1.0 / n + (p_i - 1.0 / n) * np.exp(-liouville_bound(gen, t_i, t_f, steps))
