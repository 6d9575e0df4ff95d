"""Group shifts and group cellular automata: languages, projections and decisions."""

from importlib.metadata import PackageNotFoundError, version as _version

try:
    __version__ = _version("artifact")
except PackageNotFoundError:
    __version__ = "0.1.0"

from .errors import BudgetExceeded, GcaError, ParseError, ValidationError  # noqa: E402
from .groups import FiniteGroup, power_group, preset, verify_group  # noqa: E402
from .homs import GroupShiftHom, verify_hom  # noqa: E402
from .language import Budget, compare, member  # noqa: E402
from .shifts import GroupShiftPresentation, Pattern, PeriodicConfiguration, torus_member  # noqa: E402

__all__ = [
    "Budget", "BudgetExceeded", "FiniteGroup", "GcaError", "GroupShiftHom", "GroupShiftPresentation",
    "ParseError", "Pattern", "PeriodicConfiguration", "ValidationError", "compare", "member",
    "power_group", "preset", "torus_member", "verify_group", "verify_hom",
]
