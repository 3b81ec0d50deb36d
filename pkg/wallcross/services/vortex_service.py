"""
Vortex moduli data and genus-zero vortex invariants.

For a linear action on C^N with weights w_nu and a degree kappa, the line
bundle L_nu has degree d_nu = <w_nu, kappa>. In genus zero the moduli space
of vortices is the toric quotient with multiplicities n_nu = max(0, 1 + d_nu),
and the invariant of a class alpha is the Euler class of that quotient on
alpha * prod w_nu^m_nu with m_nu = max(0, -1 - d_nu).

Higher genus is reported only: when every d_nu avoids [0, 2g - 2] the
moduli space fibres over the Jacobian torus with toric fibre of
multiplicities max(0, 1 - g + d_nu), but no invariant is computed.
"""

import logging
from fractions import Fraction
from typing import List, Optional, Tuple

from ..data_structures.multipoly import MultiPoly
from ..interfaces.vortex_interface import VortexEngineInterface
from ..models.error_codes import EngineInvariantError, PreconditionError
from ..models.problems import ModuliReport, ToricProblem, VortexProblem
from ..models.walls import LevelKind
from ..monitoring import tracker
from ..monitoring.logger import MonitoringLogger
from ..utils.exact_linalg import rank
from ..utils.rationals import format_rational, pairing
from .euler_service import WallCrossingEngine, engine as default_engine
from .weight_combinatorics import check_proper, classify_level

logger = logging.getLogger(__name__)
events_log = MonitoringLogger(__name__)


def degrees(vp: VortexProblem) -> List[int]:
    """d_nu = <w_nu, kappa>"""
    return [int(pairing(w, vp.kappa)) for w in vp.target.weights]


def in_genus_window(d: int, genus: int) -> bool:
    """True when h^0 of a degree d bundle is topological: d > 2g - 2 or d < 0"""
    return d > 2 * genus - 2 or d < 0


class VortexService(VortexEngineInterface):
    """Builds moduli data and delegates invariants to a wall-crossing engine"""

    def __init__(self, euler_engine: Optional[WallCrossingEngine] = None):
        self.euler_engine = euler_engine or default_engine

    def _check_target(self, vp: VortexProblem) -> None:
        if check_proper(vp.target) is None:
            raise PreconditionError("target weights are not proper", "weights")
        if rank(vp.target.weights) != vp.target.k:
            raise PreconditionError("target weights do not span", "weights")
        level = classify_level(vp.target, vp.tau)
        if not level.is_regular:
            raise PreconditionError(f"non-regular tau for the target ({level.render()})", "tau")

    def moduli_data(self, vp: VortexProblem) -> Tuple[ModuliReport, Optional[ToricProblem]]:
        """Moduli report and, in genus zero, the toric problem of the moduli space.

        Raises:
            PreconditionError: If the target is improper or not spanning, tau is
                not regular for the target, or in genus g >= 1 some degree falls
                in the window [0, 2g - 2]
        """
        self._check_target(vp)
        g = vp.genus
        d = degrees(vp)
        big_n = len(d)
        k = vp.target.k
        for i, value in enumerate(d):
            if not in_genus_window(value, g):
                raise PreconditionError(
                    f"degree {value} lies in [0, {2 * g - 2}]: fiber dimension jumps; out of scope",
                    f"kappa (weight {i + 1})",
                )
        n = tuple(max(0, 1 - g + value) for value in d)
        m = tuple(max(0, g - 1 - value) for value in d)
        if sum(n) - sum(m) != big_n * (1 - g) + sum(d):
            raise EngineInvariantError("Riemann-Roch bookkeeping failed", "kappa")

        toric = ToricProblem(ws=vp.target.with_multiplicities(n), tau=vp.tau)
        level = classify_level(toric.ws, vp.tau)
        empty = toric.ws.is_empty() or level.kind == LevelKind.OUTSIDE_CONE
        report = ModuliReport(
            genus=g,
            degrees=tuple(d),
            n=n,
            m=m,
            real_dimension=2 * (sum(n) - k) + (2 * g * k if g > 0 else 0),
            index=(big_n - k) * (2 - 2 * g) + 2 * sum(d),
            level=level.render(),
            orbifold=level.kind == LevelKind.REGULAR,
            empty=empty,
            jacobian_dimension=2 * g * k,
            window_ok=True,
            fiber=toric if g > 0 else None,
        )
        logger.debug(f"Moduli data for kappa={list(vp.kappa)}: n={list(n)} m={list(m)}")
        return report, (toric if g == 0 else None)

    def vortex_invariant(self, vp: VortexProblem, seed: Optional[int] = None) -> Fraction:
        """Psi(alpha) = Euler class of the moduli space on alpha * prod w_nu^m_nu.

        Raises:
            PreconditionError: If genus > 0 or tau is not regular
        """
        if vp.genus != 0:
            raise PreconditionError("vortex invariants are computed in genus zero only", "genus")
        with tracker.track("vortex_invariant", k=vp.target.k):
            report, toric = self.moduli_data(vp)
            assert toric is not None
            integrand = vp.alpha
            for w, m in zip(vp.target.weights, report.m):
                if m:
                    integrand = integrand * MultiPoly.linear_form(w) ** m
            value = self.euler_engine.euler_class(toric, integrand, seed)
        events_log.info(
            "Evaluated vortex invariant",
            kappa=list(vp.kappa),
            dimension=report.real_dimension,
            value=format_rational(value),
        )
        return value


# Shared service used by the module-level helpers and the command line driver
vortex_service = VortexService()


def moduli_data(vp: VortexProblem) -> Tuple[ModuliReport, Optional[ToricProblem]]:
    return vortex_service.moduli_data(vp)


def vortex_invariant(vp: VortexProblem, seed: Optional[int] = None) -> Fraction:
    return vortex_service.vortex_invariant(vp, seed)
