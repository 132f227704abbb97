"""The discrete solvers behind one stepping/run interface.

Three iterations share the architecture "feedforward drive plus lateral
Gram feedback":

* ``lbi``  -- gradient step on analog potentials, soft-threshold readout.
* ``bcd``  -- the same update applied to one coordinate per iteration.
* ``hda``  -- gradient step on potentials, ternary threshold broadcast;
  the output is the scaled running average of the broadcasts.

The event-driven realization of the third lives in ``hopping``.

Step functions mutate their state in place and return it; use ``run`` for
a full iteration with trace sampling and stopping.
"""

import warnings
from dataclasses import dataclass

import numpy as np

from .diagnostics import TraceRecord, energy_from_coefficients, l0_count
from .errors import StepSizeWarning, ZeroSignal
from .nonlinearity import shrink, threshold
from .noise import NoiseModel, corrupt
from .problems import Dictionary, ProblemInstance, as_dictionary, drive
from .validation import as_vector, check_state_finite

SOLVER_KINDS = ("lbi", "bcd", "hda", "hopping")
BCD_POLICIES = ("cyclic", "random", "greedy")

# Stall-rule outcome split: a plateau at essentially zero relative residual
# is a solve, anything else is a stall (noise floor, non-unique regime).
CONVERGED_REL_RESIDUAL = 1e-6


@dataclass
class SolverConfig:
    """Shared solver parameters.

    ``lam`` is the threshold / regularizer, ``delta`` the gradient step of
    the analog iteration, ``tol`` and ``stall_window`` drive the stopping
    rule: stop once the relative residual changes by less than ``tol``
    across ``stall_window`` consecutive samples.  ``tol=0`` disables the
    rule so runs use their full iteration budget.
    """

    lam: float = 10.0
    delta: float = 1.0
    max_iters: int = 10000
    tol: float = 1e-8
    stall_window: int = 10
    bcd_policy: str = "cyclic"
    bcd_seed: int = 0

    def __post_init__(self):
        if self.lam <= 0:
            raise ValueError(f"lam must be positive, got {self.lam}")
        if self.delta <= 0:
            raise ValueError(f"delta must be positive, got {self.delta}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if self.tol < 0:
            raise ValueError(f"tol must be nonnegative, got {self.tol}")
        if self.stall_window < 1:
            raise ValueError(f"stall_window must be >= 1, got {self.stall_window}")
        if self.bcd_policy not in BCD_POLICIES:
            raise ValueError(f"bcd_policy must be one of {BCD_POLICIES}, got {self.bcd_policy!r}")


@dataclass
class LbiState:
    v: np.ndarray
    u: np.ndarray
    t: int = 0


@dataclass
class BcdState:
    v: np.ndarray
    u: np.ndarray
    t: int = 0
    last_index: int = -1


@dataclass
class HdaState:
    v: np.ndarray
    s: np.ndarray
    spike_sum: np.ndarray
    t: int = 0
    u: np.ndarray = None

    def __post_init__(self):
        if self.u is None:
            self.u = np.zeros_like(self.v)


@dataclass
class RunResult:
    u: np.ndarray
    state: object
    trace: list
    stop_reason: str
    events: list | None = None
    probes: dict | None = None

    @property
    def t_final(self) -> float:
        return self.trace[-1].t if self.trace else 0.0


def zero_state(solver: str, n: int):
    if solver == "lbi":
        return LbiState(v=np.zeros(n), u=np.zeros(n))
    if solver == "bcd":
        return BcdState(v=np.zeros(n), u=np.zeros(n))
    if solver == "hda":
        return HdaState(v=np.zeros(n), s=np.zeros(n, dtype=np.int64), spike_sum=np.zeros(n, dtype=np.int64))
    raise ValueError(f"no stepped state for solver {solver!r}")


# ---------------------------------------------------------------------------
# step functions


def lbi_step(state: LbiState, dictionary: Dictionary, f, cfg: SolverConfig) -> LbiState:
    """One two-step iteration: potential gradient update, then shrink readout."""
    d = drive(dictionary, f)
    _lbi_step(state, dictionary.gram, d, cfg.lam, cfg.delta)
    return state


def _lbi_step(state: LbiState, gram, drive_k, lam, delta) -> int:
    broadcast = int(np.count_nonzero(state.u))
    state.v += drive_k - gram @ state.u
    state.u = delta * shrink(state.v, lam)
    state.t += 1
    return broadcast


def bcd_step(state: BcdState, dictionary: Dictionary, f, i: int, cfg: SolverConfig) -> BcdState:
    """Update coordinate ``i`` only: its potential, then its shrink readout."""
    n = dictionary.n
    if not 0 <= i < n:
        raise IndexError(f"coordinate {i} out of range [0, {n})")
    f = as_vector(f, length=dictionary.m, name="signal")
    r = dictionary.entries @ state.u - f
    _bcd_apply(state, dictionary, r, i, cfg.lam)
    return state


def _bcd_apply(state: BcdState, dictionary: Dictionary, residual, i: int, lam) -> int:
    state.v[i] -= float(dictionary.entries[:, i] @ residual)
    state.u[i] = shrink(float(state.v[i]), lam)
    state.t += 1
    state.last_index = i
    return int(state.u[i] != 0.0)


def select_index(state: BcdState, dictionary: Dictionary, f, cfg: SolverConfig, rng=None) -> int:
    """Next coordinate under the configured policy.

    cyclic: successor of the last updated index.  random: uniform draw from
    ``rng`` (a fresh generator seeded with ``cfg.bcd_seed`` when omitted).
    greedy: largest-magnitude gradient, lowest index on ties.
    """
    n = dictionary.n
    if cfg.bcd_policy == "cyclic":
        return (state.last_index + 1) % n
    if cfg.bcd_policy == "random":
        if rng is None:
            rng = np.random.default_rng(cfg.bcd_seed)
        return int(rng.integers(n))
    f = as_vector(f, length=dictionary.m, name="signal")
    grad = dictionary.entries.T @ (dictionary.entries @ state.u - f)
    return int(np.argmax(np.abs(grad)))


def hda_step(state: HdaState, dictionary: Dictionary, f, cfg: SolverConfig) -> HdaState:
    """One integrate-and-fire iteration.

    The potential update uses the previous broadcast ``s``; a node that
    fired is reset by threshold subtraction through the unit Gram diagonal,
    never to zero.
    """
    d = drive(dictionary, f)
    _hda_step(state, dictionary.gram, d, cfg.lam)
    return state


def _hda_step(state: HdaState, gram, drive_k, lam) -> int:
    idx = np.flatnonzero(state.s)
    if idx.size:
        state.v += drive_k - lam * (gram[:, idx] @ state.s[idx])
    else:
        state.v += drive_k
    state.t += 1
    state.s = threshold(state.v, lam)
    state.spike_sum += state.s
    state.u = (lam / state.t) * state.spike_sum
    return int(np.count_nonzero(state.s))


# ---------------------------------------------------------------------------
# run loop


def _zero_signal_result(solver: str, n: int) -> RunResult:
    state = zero_state(solver, n) if solver != "hopping" else None
    record = TraceRecord(t=0.0, residual=0.0, rel_residual=0.0, energy=0.0,
                         l1=0.0, l0=0, comm_events=0, analog_msgs=0)
    return RunResult(u=np.zeros(n), state=state, trace=[record], stop_reason="converged",
                     events=[] if solver == "hopping" else None)


class _Tracer:
    """Accumulates trace records and applies the stall-based stopping rule."""

    def __init__(self, dictionary, clean_f, cfg, sample_every):
        self.dictionary = dictionary
        self.clean_f = clean_f
        self.norm_f = float(np.linalg.norm(clean_f))
        self.cfg = cfg
        self.sample_every = max(1, int(sample_every))
        self.records: list[TraceRecord] = []

    def due(self, t: int) -> bool:
        return t % self.sample_every == 0

    def record(self, t: float, u, comm: int, analog: int) -> None:
        res = float(np.linalg.norm(self.dictionary.entries @ u - self.clean_f))
        self.records.append(TraceRecord(
            t=float(t),
            residual=res,
            rel_residual=res / self.norm_f,
            energy=energy_from_coefficients(u, t, self.dictionary, self.clean_f, self.cfg.lam),
            l1=float(np.sum(np.abs(u))),
            l0=l0_count(u),
            comm_events=int(comm),
            analog_msgs=int(analog),
        ))

    def stalled(self) -> bool:
        w = self.cfg.stall_window
        if len(self.records) <= w:
            return False
        change = abs(self.records[-1].rel_residual - self.records[-1 - w].rel_residual)
        return change < self.cfg.tol

    def stop_reason(self) -> str:
        return "converged" if self.records[-1].rel_residual <= CONVERGED_REL_RESIDUAL else "stalled"


def run(
    solver: str,
    instance,
    f=None,
    cfg: SolverConfig | None = None,
    sample_every: int = 10,
    noise: NoiseModel | None = None,
    probe=None,
) -> RunResult:
    """Run a solver to its stopping rule, sampling diagnostics along the way.

    ``instance`` is a ProblemInstance, Dictionary, or column-normalized
    matrix; ``f`` defaults to the instance's clean signal.  With a noise
    model, each iteration sees its own corrupted signal while the trace
    keeps measuring against the clean one.  ``probe`` lists node indices
    whose potentials are recorded every iteration.
    """
    if solver not in SOLVER_KINDS:
        raise ValueError(f"unknown solver {solver!r}; expected one of {SOLVER_KINDS}")
    if isinstance(instance, ProblemInstance):
        dictionary = instance.dictionary
        if f is None:
            f = instance.clean_signal
    else:
        dictionary = as_dictionary(instance)
    if f is None:
        raise ValueError("a signal is required when not running on a ProblemInstance")
    f = as_vector(f, length=dictionary.m, name="signal")
    cfg = cfg or SolverConfig()

    if solver == "hopping":
        from .hopping import hopping_run

        if noise is not None:
            raise ValueError("the event-driven solver needs a static signal; "
                             "time-varying noise is only supported by discrete solvers")
        result, _ = hopping_run(dictionary, f, cfg, t_end=float(cfg.max_iters),
                                sample_every=sample_every)
        return result

    if float(np.linalg.norm(f)) == 0.0:
        if noise is not None:
            raise ZeroSignal("relative diagnostics undefined for a zero clean signal")
        return _zero_signal_result(solver, dictionary.n)

    tracer = _Tracer(dictionary, f, cfg, sample_every)
    state = zero_state(solver, dictionary.n)
    gram = dictionary.gram
    entries = dictionary.entries
    clean_drive = entries.T @ f
    comm = 0
    analog = 0

    if solver == "lbi":
        smax = dictionary.spectral_norm()
        if cfg.delta >= 2.0 / (smax * smax):
            warnings.warn(
                f"delta={cfg.delta} is at or above 2/sigma_max^2={2.0 / (smax * smax):.4g}; "
                "the analog iteration may oscillate",
                StepSizeWarning,
            )

    rng = np.random.default_rng(cfg.bcd_seed) if (solver == "bcd" and cfg.bcd_policy == "random") else None
    probe = list(probe) if probe else None
    probe_v = [] if probe else None
    probe_s = [] if (probe and solver == "hda") else None

    stop_reason = "max_iters"
    for t in range(1, cfg.max_iters + 1):
        if noise is not None:
            f_k = corrupt(f, noise, t)
            drive_k = entries.T @ f_k
        else:
            f_k = f
            drive_k = clean_drive

        if solver == "lbi":
            analog += _lbi_step(state, gram, drive_k, cfg.lam, cfg.delta)
        elif solver == "hda":
            comm += _hda_step(state, gram, drive_k, cfg.lam)
        else:
            residual_k = entries @ state.u - f_k
            if cfg.bcd_policy == "cyclic":
                i = (state.last_index + 1) % dictionary.n
            elif cfg.bcd_policy == "random":
                i = int(rng.integers(dictionary.n))
            else:
                i = int(np.argmax(np.abs(entries.T @ residual_k)))
            analog += _bcd_apply(state, dictionary, residual_k, i, cfg.lam)

        if probe:
            probe_v.append(state.v[probe].copy())
            if probe_s is not None:
                probe_s.append(state.s[probe].copy())

        if tracer.due(t):
            check_state_finite(state.v, t)
            tracer.record(t, state.u, comm, analog)
            if tracer.stalled():
                stop_reason = tracer.stop_reason()
                break

    if not tracer.records or tracer.records[-1].t != state.t:
        check_state_finite(state.v, state.t)
        tracer.record(state.t, state.u, comm, analog)

    probes = None
    if probe:
        probes = {"nodes": probe, "t": np.arange(1, len(probe_v) + 1), "v": np.asarray(probe_v)}
        if probe_s is not None:
            probes["s"] = np.asarray(probe_s)

    return RunResult(u=state.u.copy(), state=state, trace=tracer.records,
                     stop_reason=stop_reason, probes=probes)
