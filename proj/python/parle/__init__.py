"""Path-label reconciliation (PLR) dissimilarity for reconciled gene trees."""

from ._parle import *  # noqa: F401,F403
from ._parle import __version__  # noqa: F401
