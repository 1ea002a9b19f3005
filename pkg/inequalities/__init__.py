from inequalities.norms import BrokenNormSpec, broken_norm, broken_tilde_norm
from inequalities.sampling import InequalityEstimate, estimate_constant

__all__ = ["BrokenNormSpec", "InequalityEstimate", "broken_norm", "broken_tilde_norm", "estimate_constant"]
