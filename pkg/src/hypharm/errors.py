"""Shared exception types.

Configuration problems (bad parameters, malformed specs) raise ValueError
subclasses like :class:`hypharm.space.SpaceError`; genuine numerical failures
(quadrature not converging, ill-conditioned fits, diverging iterations) raise
:class:`NumericsError` so callers - the CLI in particular - can tell the two
apart.
"""


class NumericsError(RuntimeError):
    """A numerical routine failed to reach its documented accuracy."""
