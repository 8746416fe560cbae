"""Exception taxonomy shared across the package.

Structural problems (bad presentations, mismatched rings, maps that are
not balanced) raise eagerly; searches and numeric routines raise their
own dedicated errors so callers can tell "refuted" apart from "gave up".
"""

from __future__ import annotations


class MoritaLabError(Exception):
    """Base class for every error raised by this package."""


class InfiniteQuotient(MoritaLabError):
    """A quotient that was required to be finite has a free direction."""


class NoSolution(MoritaLabError):
    """A linear congruence system has no integer solution."""


class RingMismatch(MoritaLabError):
    """Two-sided structures were combined over different rings."""


class NotBalanced(MoritaLabError):
    """A bilinear map fails balance or bilinearity on generators."""


class UnitDegenerate(MoritaLabError):
    """A ring presentation whose unit generates nothing (zero ring)."""


class SearchBudgetExceeded(MoritaLabError):
    """A combinatorial search hit its configured size or node cap."""


class AlgebraMismatch(MoritaLabError):
    """Operands attached to different von Neumann algebras."""


class NotPSD(MoritaLabError):
    """A matrix required to be positive semidefinite is not."""


class NotFaithful(MoritaLabError):
    """A state whose density matrix is (numerically) singular."""


class NotHomomorphism(MoritaLabError):
    """Data that fails to define a *-homomorphism on matrix units."""


class Singular(MoritaLabError):
    """An operator required to be invertible is numerically singular."""


class CapExceeded(MoritaLabError):
    """A problem instance is larger than the configured hard cap."""


class NotComposable(MoritaLabError):
    """Cells whose endpoints do not line up for the requested composite."""


class SpecError(MoritaLabError):
    """A problem specification file that does not parse or validate."""
