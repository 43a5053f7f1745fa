"""Exception types shared across the package."""


class RealFormsError(Exception):
    """Base class for all errors raised by this package."""


class ZeroDiscriminant(RealFormsError):
    """The cubic is singular; all constructions require a smooth curve."""


class NotAllReal(RealFormsError):
    """The curve has one real component, so not all 2-torsion is real."""


class PrecisionExhausted(RealFormsError):
    """Interval refinement hit the precision ceiling without a decision."""


class NoRealAssociates(RealFormsError):
    """The point lies on the compact oval and has no real associated points."""


class InflectionPoint(RealFormsError):
    """The point is 3-torsion; the tangent construction degenerates."""


class SearchExhausted(RealFormsError):
    """Randomized search gave up after the configured number of attempts."""


class LabellingAmbiguous(RealFormsError):
    """Two-torsion matching intervals still overlap at the precision ceiling."""


class CollinearTriple(RealFormsError):
    """Three configuration points are collinear; independence must have failed."""


class DimensionMismatch(RealFormsError):
    """Lattice objects of different rank were combined."""


class IdentityViolated(RealFormsError):
    """The quadratic-form identity failed; the matrix is not an isometry."""


class UnexpectedSolution(RealFormsError):
    """An elimination equation has a solution besides zero; pipeline falsified."""


class NotPhiCompatible(RealFormsError):
    """No restriction pair (a, B) is consistent with the matrix; it cannot come
    from an automorphism of the blown-up surface."""


class InconsistentPipeline(RealFormsError):
    """The restriction classification produced contradictory intermediate data."""


class ConstraintViolated(RealFormsError):
    """A coefficient constraint fails for a matrix that classified cleanly."""


class NonRealConfiguration(RealFormsError):
    """The surface configuration contains points not certified real."""


class RepeatedPoint(RealFormsError):
    """An operation expecting distinct configuration points got a repeat."""


class ParseError(RealFormsError):
    """A certificate file does not parse against the expected schema."""


class StepMismatch(RealFormsError):
    """A replayed derivation step disagrees with the recorded one."""
