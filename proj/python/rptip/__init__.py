"""Python access to the rptip core library."""

from ._core import (
    __version__,
    gly_picture,
    gly_rhs,
    vdp_amplitude_roots,
    vdp_picture,
    vdp_rhs,
)

__all__ = [
    "__version__",
    "gly_picture",
    "gly_rhs",
    "vdp_amplitude_roots",
    "vdp_picture",
    "vdp_rhs",
]
