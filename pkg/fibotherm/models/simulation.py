from pydantic import Field

from .base import ReportModel


class WalkRunReport(ReportModel):
    """
    Summary of a Monte Carlo run of the induced random walk.

    :ivar lam: The parameter.
    :ivar n_walkers: The number of walkers, all starting in state 1.
    :ivar n_steps: The number of steps of each walker.
    :ivar seed: The master seed.
    :ivar threshold: The state from which a walker counts as escaped.
    :ivar cap: The largest state; walkers that pass it are frozen and count as escaped.
    :ivar escape_fraction: The fraction of walkers that end at or above the threshold, or are frozen.
    :ivar frozen_fraction: The fraction of walkers frozen at the cap.
    :ivar histogram: Occupation frequencies of states 1..bins after the burn-in, followed by the overflow bin.
    :ivar drift: The mean increment from states k >= 2.
    :ivar drift_stderr: The standard error of the mean increment.
    :ivar expected_drift: The drift (2 lam - 1) / (1 - lam) of the Fibonacci walk.
    :ivar tv_distance: The total variation distance to the stationary vector, when it exists.
    """

    row_fields = (
        "lambda",
        "n_walkers",
        "n_steps",
        "seed",
        "threshold",
        "escape_fraction",
        "frozen_fraction",
        "drift",
        "drift_stderr",
        "expected_drift",
        "tv_distance",
    )

    lam: float = Field(alias="lambda")
    n_walkers: int
    n_steps: int
    seed: int
    threshold: int
    cap: int
    escape_fraction: float
    frozen_fraction: float
    histogram: tuple[float, ...]
    drift: float
    drift_stderr: float
    expected_drift: float
    tv_distance: float | None = None


class OrbitReport(ReportModel):
    """
    The branch indices visited by an orbit of the induced map.

    :ivar x0: The starting point.
    :ivar branches: The branch index of each return.
    :ivar returns: The number of returns.
    :ivar escaped: True if the orbit entered the unresolved tail near c.
    :ivar status: "ok", or the reason the orbit stopped.
    """

    row_fields = ("x0", "returns", "escaped", "status")

    x0: str
    branches: tuple[int, ...]
    returns: int
    escaped: bool
    status: str = "ok"


class FrequencyTest(ReportModel):
    """
    A chi-square test of the observed successors of a state against a row of the transition matrix.

    :ivar state: The state.
    :ivar count: The number of observed transitions from the state.
    :ivar statistic: The chi-square statistic.
    :ivar dof: The degrees of freedom.
    :ivar p_value: The p-value of the statistic.
    :ivar passed: True if the p-value is at least the significance level.
    """

    state: int
    count: int
    statistic: float
    dof: int
    p_value: float
    passed: bool
