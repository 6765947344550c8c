from typing_extensions import Self

from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import model_validator

from fibotherm.exceptions import KneadingIndexError

from .base import ReportModel


class KneadingData(BaseModel):
    """
    A kneading map and its cutting times.

    ``Q`` holds the kneading map for k = 1..K behind a sentinel ``Q[0] = 0``, so that iterates such as Q(Q(k)) are
    defined when Q(k) = 0. ``S`` holds the cutting times for k = 0..K as exact integers.

    :ivar Q: Kneading map values, ``Q[0]`` is the sentinel 0.
    :ivar S: Cutting times, with ``S[0] = 1`` and ``S[k] = S[k-1] + S[Q[k]]``.
    :ivar K: Truncation depth.
    """

    model_config = ConfigDict(frozen=True)

    Q: tuple[int, ...]
    S: tuple[int, ...]
    K: int

    @model_validator(mode="after")
    def _validate_model(self) -> Self:
        if self.K < 1:
            raise ValueError("K must be at least 1")
        if len(self.Q) != self.K + 1 or len(self.S) != self.K + 1:
            raise ValueError(f"Q and S must have K+1={self.K + 1} entries")
        if self.Q[0] != 0:
            raise ValueError("Q[0] must be the sentinel 0")
        if self.S[0] != 1:
            raise ValueError("S[0] must be 1")
        for k in range(1, self.K + 1):
            if not 0 <= self.Q[k] < k:
                raise ValueError(f"Q[{k}]={self.Q[k]} must satisfy 0 <= Q[k] < k")
            if self.S[k] != self.S[k - 1] + self.S[self.Q[k]]:
                raise ValueError(f"S[{k}] does not satisfy S[k] = S[k-1] + S[Q[k]]")
        return self

    def q(self, k: int) -> int:
        """
        Get Q(k), with Q(0) = 0.

        :param k: The index.
        :raises KneadingIndexError: If k lies beyond the truncation depth.
        :return: The value Q(k).
        """
        if not 0 <= k <= self.K:
            raise KneadingIndexError(f"Q({k}) is not defined at depth K={self.K}")
        return self.Q[k]

    def q2(self, k: int) -> int:
        """Get Q(Q(k))."""
        return self.q(self.q(k))

    def cutting_time(self, k: int) -> int:
        """
        Get S_k, with S_{-1} = 1 as used by the weight recursions.

        :param k: The index, at least -1.
        :raises KneadingIndexError: If k lies beyond the truncation depth.
        :return: The cutting time S_k.
        """
        if k == -1:
            return 1
        if not 0 <= k <= self.K:
            raise KneadingIndexError(f"S_{k} is not defined at depth K={self.K}")
        return self.S[k]


class AdmissibilityReport(BaseModel):
    """
    The outcome of the lexicographic admissibility scan.

    :ivar admissible: False if some k fails the comparison within the available depth.
    :ivar qualified: True if some comparison ran out of depth before a strict decision, i.e. verified to depth K.
    :ivar depth: The depth K of the scanned kneading map.
    :ivar first_failure: The first k that fails, if any.
    """

    model_config = ConfigDict(frozen=True)

    admissible: bool
    qualified: bool
    depth: int
    first_failure: int | None = None

    def __bool__(self) -> bool:
        return self.admissible


class KneadingRow(ReportModel):
    """A CSV row with the kneading value, cutting time, and side of c_{S_k} at a single index."""

    k: int
    Q: int
    S: int
    side: int
