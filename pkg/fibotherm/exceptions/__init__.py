from . import base
from . import construction
from . import evaluation
from . import numerics
from .base import FibothermException
from .base import ParameterError
from .construction import ConditionFailureError
from .construction import KneadingIndexError
from .construction import NonSummableError
from .construction import TailTooShortError
from .evaluation import BoundaryPointError
from .evaluation import DepthExceededError
from .evaluation import OutsideDomainError
from .numerics import BracketFailureError
from .numerics import CombinatorialOverflowError
from .numerics import DivisionNearZeroError
from .numerics import InfiniteInducingTimeError
from .numerics import InvariantUnavailableError
from .numerics import NoConvergenceError
from .numerics import NonPositiveWeightError
from .numerics import PrecisionExhaustedError
