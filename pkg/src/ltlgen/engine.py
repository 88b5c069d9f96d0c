"""Episode loop, policy, and tabular double-Q learning over decision keys.

The learner's state space is the set of tails: bounded recent
(action, state) history, so the same GUI state reached along different
paths can earn different values.  A decision is a tail plus an action
signature.  Stateless side tables keyed by action labelings seed values for
decisions made from tails never seen before.

Before choosing an action the engine screens the enabled set using action
labels alone: actions whose labels already falsify the formula are dropped
before execution, an action whose labels alone satisfy it is taken
immediately, and if nothing survives the previous decision is charged with
the dead end.
"""

from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field, replace
from typing import NamedTuple, Sequence

from .formula import (
    FALSE,
    Formula,
    Labeling,
    TRUE,
    atom_set,
    simplify,
)
from .model import (
    ActionNotEnabled,
    ActionSig,
    AppModel,
    EnvSession,
    GuiAction,
    action_labeling,
    state_labeling,
)
from .progression import advance, expand, projection, restrict, shaped_reward

Tail = tuple[tuple[ActionSig, str], ...]


class Decision(NamedTuple):
    """A choice point: the recent history it was made from plus the action."""

    tail: Tail
    action: ActionSig


@dataclass
class LearnerConfig:
    """All knobs of a generation run; defaults are tuned for desk-scale models."""

    episodes: int = 500
    steps: int = 4
    t0: float = 5.0
    t_delta: float = 0.05
    t_min: float = 0.5
    eps0: float = 0.2
    eps_update: float = 0.99
    eps_min: float = 0.01
    eta0: float = 1.0
    eta_update: float = 0.999
    eta_min: float = 0.1
    elig_decay: float = 0.9
    doubleness: float = 0.5
    vigilance: float = 1.0
    elig_min: float = 0.01
    tail_length: int = 2
    shaping: bool = True
    predict: bool = True
    seed: int = 0

    def validate(self) -> None:
        if self.episodes < 0:
            raise ValueError("episodes must be >= 0")
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        for name in ("t0", "t_delta", "t_min", "eps0", "eps_min", "eta0", "eta_min"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.t_min > self.t0:
            raise ValueError("t_min must not exceed t0")
        if self.eps_min > self.eps0:
            raise ValueError("eps_min must not exceed eps0")
        if self.eta_min > self.eta0:
            raise ValueError("eta_min must not exceed eta0")
        if self.eps0 > 1:
            raise ValueError("eps0 must be a probability")
        for name in ("eps_update", "eta_update"):
            if not 0 < getattr(self, name) <= 1:
                raise ValueError(f"{name} must be in (0, 1]")
        for name in ("elig_decay", "doubleness"):
            if not 0 <= getattr(self, name) <= 1:
                raise ValueError(f"{name} must be in [0, 1]")
        if self.vigilance <= 0:
            raise ValueError("vigilance must be positive")
        if self.elig_min <= 0:
            raise ValueError("elig_min must be positive")
        if self.tail_length < 0:
            raise ValueError("tail_length must be >= 0")


@dataclass
class QStore:
    """Tabular double-Q state plus the stateless action-label side tables."""

    q1: dict[Decision, float] = field(default_factory=dict)
    q2: dict[Decision, float] = field(default_factory=dict)
    qa1: dict[Labeling, float] = field(default_factory=dict)
    qa2: dict[Labeling, float] = field(default_factory=dict)
    elig: dict[Decision, float] = field(default_factory=dict)
    seen_tails: set[Tail] = field(default_factory=set)
    action_labels: dict[ActionSig, Labeling] = field(default_factory=dict)


@dataclass(frozen=True)
class StepRecord:
    """One executed action: its labeling, the remaining obligation, reward, update."""

    index: int
    action: GuiAction
    labels: Labeling
    formula: Formula
    reward: float
    delta: float


@dataclass
class EpisodeLog:
    index: int
    steps: list[StepRecord]
    outcome: str  # satisfied | falsified | dead_end | exhausted

    @property
    def satisfied(self) -> bool:
        return self.outcome == "satisfied"


@dataclass(frozen=True)
class RunStats:
    outcome: str  # satisfied | exhausted
    episodes: int
    steps: int
    wall_time_ms: float
    seed: int


@dataclass
class GenerationResult:
    test: list[GuiAction] | None
    stats: RunStats
    episodes: list[EpisodeLog]

    @property
    def satisfied(self) -> bool:
        return self.test is not None


def policy_probabilities(
    store: QStore, candidates: Sequence[Decision], temperature: float, epsilon: float
) -> list[float]:
    """Softmax over summed Q-values mixed with an epsilon-uniform floor."""
    scores = [
        (store.q1.get(d, 0.0) + store.q2.get(d, 0.0)) / (2.0 * temperature) for d in candidates
    ]
    peak = max(scores)
    weights = [math.exp(s - peak) for s in scores]
    total = sum(weights)
    uniform = 1.0 / len(candidates)
    return [(1.0 - epsilon) * w / total + epsilon * uniform for w in weights]


def decide_next_action(
    store: QStore,
    candidates: Sequence[Decision],
    temperature: float,
    epsilon: float,
    rng: random.Random,
) -> Decision:
    """Sample one decision according to the policy distribution."""
    if not candidates:
        raise ValueError("no candidate decisions to choose from")
    probabilities = policy_probabilities(store, candidates, temperature, epsilon)
    roll = rng.random()
    acc = 0.0
    for decision, probability in zip(candidates, probabilities):
        acc += probability
        if roll < acc:
            return decision
    return candidates[-1]


SATISFIED = "satisfied"
DEAD_END = "dead_end"
CONTINUE = "continue"


@dataclass(frozen=True)
class Prediction:
    """Outcome of pre-execution action screening."""

    kind: str
    action: GuiAction | None = None
    survivors: tuple[tuple[Decision, GuiAction], ...] = ()


def prune_and_predict(
    phi: Formula,
    tail: Tail,
    enabled: Sequence[GuiAction],
    action_alphabet: frozenset,
) -> Prediction:
    """Screen enabled actions by what their labels alone do to the formula.

    An action whose label-restricted projection is already false can never
    be part of a satisfying continuation and is dropped; one whose
    projection is already true satisfies the formula regardless of the
    resulting state.  State-scope predicates stay symbolic here, so
    surviving actions still face the full projection after execution.
    """
    expanded = expand(phi)
    survivors: list[tuple[Decision, GuiAction]] = []
    for action in enabled:
        labels = action_labeling(action, action_alphabet)
        residue = simplify(advance(restrict(expanded, labels, action_only=True)))
        if residue == TRUE:
            return Prediction(SATISFIED, action=action)
        if residue == FALSE:
            continue
        survivors.append((Decision(tail, action.signature), action))
    if not survivors:
        return Prediction(DEAD_END)
    return Prediction(CONTINUE, survivors=tuple(survivors))


def _clamp(value: float, bound: float) -> float:
    return min(max(value, -bound), bound)


def learn(
    store: QStore,
    decision: Decision,
    reward: float,
    config: LearnerConfig,
    eta: float,
    rng: random.Random,
    is_new_state: bool | None = None,
    action_labels: Labeling | None = None,
) -> float:
    """One reinforcement: myopic update swept over all eligible decisions.

    A decision made from a never-seen tail is first seeded from the
    stateless table for its action labeling.  The stateless tables learn in
    step with the per-decision tables and share the vigilance clamp, and the
    table pairs swap together half of the time.
    """
    if action_labels is None:
        action_labels = store.action_labels.get(decision.action, Labeling())
    store.action_labels.setdefault(decision.action, action_labels)
    if is_new_state is None:
        is_new_state = decision.tail not in store.seen_tails
    store.seen_tails.add(decision.tail)
    if is_new_state:
        store.q1[decision] = store.qa1.get(action_labels, 0.0)
    delta = reward - store.q1.get(decision, 0.0)
    store.elig[decision] = store.elig.get(decision, 0.0) + 1.0
    bound = config.vigilance
    mix = config.doubleness
    for eligible, trace_value in list(store.elig.items()):
        labels = store.action_labels[eligible.action]
        step = eta * delta * trace_value
        store.qa1[labels] = _clamp(store.qa1.get(labels, 0.0) + step, bound)
        store.q1[eligible] = _clamp(store.q1.get(eligible, 0.0) + step, bound)
        store.qa2[labels] = (1.0 - mix) * store.qa1[labels] + mix * store.qa2.get(labels, 0.0)
        store.q2[eligible] = (1.0 - mix) * store.q1[eligible] + mix * store.q2.get(eligible, 0.0)
        decayed = config.elig_decay * trace_value
        if decayed >= config.elig_min:
            store.elig[eligible] = decayed
        else:
            del store.elig[eligible]
    if rng.random() < 0.5:
        store.q1, store.q2 = store.q2, store.q1
        store.qa1, store.qa2 = store.qa2, store.qa1
    return delta


def anneal(
    temperature: float, epsilon: float, eta: float, config: LearnerConfig
) -> tuple[float, float, float]:
    """Post-episode schedule step; each value decays onto its floor."""
    return (
        max(temperature - config.t_delta, config.t_min),
        max(config.eps_update * epsilon, config.eps_min),
        max(config.eta_update * eta, config.eta_min),
    )


def run_episode(
    session: EnvSession,
    phi0: Formula,
    store: QStore,
    config: LearnerConfig,
    *,
    index: int = 1,
    temperature: float | None = None,
    epsilon: float | None = None,
    eta: float | None = None,
    policy_rng: random.Random | None = None,
    swap_rng: random.Random | None = None,
    learning: bool = True,
) -> EpisodeLog:
    """Drive one episode from the don't-care state until the verdict resolves
    or the step budget runs out.  Clears the eligibility trace first."""
    if temperature is None:
        temperature = config.t0
    if epsilon is None:
        epsilon = config.eps0
    if eta is None:
        eta = config.eta0
    if policy_rng is None or swap_rng is None:
        master = random.Random(config.seed)
        policy_rng = policy_rng or random.Random(master.getrandbits(64))
        swap_rng = swap_rng or random.Random(master.getrandbits(64))
    session.reset()
    store.elig.clear()
    alphabet = atom_set(phi0)
    action_alphabet = frozenset(a for a in alphabet if a.is_action)
    state_alphabet = alphabet - action_alphabet
    phi = phi0
    tail: Tail = ()
    steps: list[StepRecord] = []
    previous: tuple[Decision, Labeling] | None = None
    outcome = "exhausted"
    for k in range(config.steps):
        enabled = session.enabled_actions()
        if learning and config.predict:
            prediction = prune_and_predict(phi, tail, enabled, action_alphabet)
            if prediction.kind == DEAD_END:
                if previous is not None:
                    prev_decision, prev_labels = previous
                    delta = learn(
                        store, prev_decision, -1.0, config, eta, swap_rng,
                        action_labels=prev_labels,
                    )
                    steps[-1] = replace(steps[-1], reward=-1.0, delta=delta)
                outcome = "dead_end"
                break
            if prediction.kind == SATISFIED:
                assert prediction.action is not None
                action = prediction.action
                decision = Decision(tail, action.signature)
            else:
                by_decision = dict(prediction.survivors)
                decision = decide_next_action(
                    store, list(by_decision), temperature, epsilon, policy_rng
                )
                action = by_decision[decision]
        else:
            candidates = [(Decision(tail, a.signature), a) for a in enabled]
            by_decision = dict(candidates)
            if learning:
                decision = decide_next_action(
                    store, list(by_decision), temperature, epsilon, policy_rng
                )
            else:
                decision = candidates[policy_rng.randrange(len(candidates))][0]
            action = by_decision[decision]
        state = session.execute(action)
        action_labels = action_labeling(action, action_alphabet)
        labels = action_labels | state_labeling(state, state_alphabet)
        verdict = projection(phi, labels)
        reward = shaped_reward(phi, verdict, config.shaping)
        delta = 0.0
        if learning:
            delta = learn(
                store, decision, reward, config, eta, swap_rng, action_labels=action_labels
            )
        steps.append(StepRecord(k, action, labels, verdict.formula, reward, delta))
        if config.tail_length > 0:
            tail = (tail + ((action.signature, state.id),))[-config.tail_length:]
        previous = (decision, action_labels)
        phi = verdict.formula
        if verdict.is_true:
            outcome = "satisfied"
            break
        if verdict.is_false:
            outcome = "falsified"
            break
    return EpisodeLog(index, steps, outcome)


def _drive(model: AppModel, phi0: Formula, config: LearnerConfig, learning: bool) -> GenerationResult:
    config.validate()
    phi = simplify(phi0)
    master = random.Random(config.seed)
    policy_rng = random.Random(master.getrandbits(64))
    swap_rng = random.Random(master.getrandbits(64))
    session = EnvSession(model, seed=master.getrandbits(64))
    store = QStore()
    temperature, epsilon, eta = config.t0, config.eps0, config.eta0
    start = time.monotonic()
    logs: list[EpisodeLog] = []
    total_steps = 0
    test: list[GuiAction] | None = None
    for i in range(1, config.episodes + 1):
        log = run_episode(
            session,
            phi,
            store,
            config,
            index=i,
            temperature=temperature,
            epsilon=epsilon,
            eta=eta,
            policy_rng=policy_rng,
            swap_rng=swap_rng,
            learning=learning,
        )
        logs.append(log)
        total_steps += len(log.steps)
        if log.satisfied:
            test = [record.action for record in log.steps]
            break
        temperature, epsilon, eta = anneal(temperature, epsilon, eta, config)
    wall_ms = (time.monotonic() - start) * 1000.0
    outcome = "satisfied" if test is not None else "exhausted"
    stats = RunStats(outcome, len(logs), total_steps, wall_ms, config.seed)
    return GenerationResult(test, stats, logs)


def generate(model: AppModel, phi0: Formula, config: LearnerConfig) -> GenerationResult:
    """Learn and return a satisfying test, or exhaust the episode budget."""
    return _drive(model, phi0, config, learning=True)


def random_policy_generate(model: AppModel, phi0: Formula, config: LearnerConfig) -> GenerationResult:
    """Baseline: uniform action choice, no learning, no screening; the
    formula is still checked by projection after every step."""
    return _drive(model, phi0, config, learning=False)


def replay(
    model: AppModel,
    test: Sequence[GuiAction] | Sequence[tuple[str, tuple[str, ...]]],
    phi0: Formula,
    seed: int = 0,
    shaping: bool = True,
) -> EpisodeLog:
    """Execute a fixed action sequence and report per-step rewards and the
    final verdict.  Stops early once the verdict resolves."""
    session = EnvSession(model, seed=seed)
    phi = simplify(phi0)
    alphabet = atom_set(phi)
    action_alphabet = frozenset(a for a in alphabet if a.is_action)
    state_alphabet = alphabet - action_alphabet
    steps: list[StepRecord] = []
    outcome = "exhausted"
    for k, item in enumerate(test):
        action = _resolve_action(session, item, k)
        state = session.execute(action)
        labels = action_labeling(action, action_alphabet) | state_labeling(state, state_alphabet)
        verdict = projection(phi, labels)
        reward = shaped_reward(phi, verdict, shaping)
        steps.append(StepRecord(k, action, labels, verdict.formula, reward, 0.0))
        phi = verdict.formula
        if verdict.is_true:
            outcome = "satisfied"
            break
        if verdict.is_false:
            outcome = "falsified"
            break
    return EpisodeLog(1, steps, outcome)


def _resolve_action(
    session: EnvSession, item: GuiAction | tuple[str, tuple[str, ...]], index: int
) -> GuiAction:
    if isinstance(item, GuiAction):
        wanted_type, wanted_params = item.action_type, item.params
    else:
        wanted_type, wanted_params = item[0], tuple(item[1])
    for action in session.enabled_actions():
        if action.action_type == wanted_type and action.params == wanted_params:
            return action
    wanted = " ".join((wanted_type,) + wanted_params)
    raise ActionNotEnabled(
        f"step {index}: {wanted!r} is not enabled in state {session.current.id!r}"
    )
