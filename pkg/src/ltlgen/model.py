"""Simulated GUI application models.

A model file declares states (attributes plus widgets), the actions enabled
in each state, and weighted transitions.  An :class:`EnvSession` exposes the
three observations an episode needs: the enabled actions of the current
state, the sampled successor of an executed action, and predicate labelings
for states and actions.

The pre-launch don't-care state is implicit: it is never listed in a file,
and the only actions enabled there are the reinitialize actions derived from
the file's ``initial`` map.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from .formula import AtomicProposition, Labeling


class ModelError(Exception):
    """Model or test file failed to load or validate."""


class ActionNotEnabled(Exception):
    """An action was executed in a state that does not enable it."""


class MissingTransition(Exception):
    """An enabled action has no declared successor distribution."""


DONT_CARE_ID = "∅"

ActionSig = tuple[str, tuple[str, ...], str]


@dataclass(frozen=True)
class Widget:
    object_id: str
    text: str = ""
    bounds: tuple[int, int, int, int] = (0, 0, 1, 1)
    checked: bool | None = None

    @property
    def center(self) -> tuple[int, int]:
        x1, y1, x2, y2 = self.bounds
        return (x1 + x2) // 2, (y1 + y2) // 2


@dataclass(frozen=True)
class GuiAction:
    """One executable gesture; ``target``/``detail`` come from the widget it
    acts on and are empty for widget-independent actions."""

    action_type: str
    params: tuple[str, ...] = ()
    target: str = ""
    detail: str = ""

    @property
    def signature(self) -> ActionSig:
        return (self.action_type, self.params, self.target)

    def describe(self) -> str:
        return " ".join((self.action_type,) + self.params)


@dataclass(frozen=True)
class GuiState:
    id: str
    attributes: dict[str, str]
    widgets: tuple[Widget, ...]

    @property
    def is_dont_care(self) -> bool:
        return self.id == DONT_CARE_ID


DONT_CARE = GuiState(DONT_CARE_ID, {}, ())

Distribution = tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class AppModel:
    """Validated, immutable model; sessions over it may run in parallel."""

    screen: tuple[int, int]
    initial: dict[str, str]
    states: dict[str, GuiState]
    enabled: dict[str, tuple[GuiAction, ...]]
    transitions: dict[tuple[str, ActionSig], Distribution]

    def enabled_in(self, state: GuiState) -> tuple[GuiAction, ...]:
        if state.is_dont_care:
            return tuple(
                GuiAction("reinitialize", (activity,)) for activity in sorted(self.initial)
            )
        return self.enabled[state.id]

    def transition(self, state: GuiState, action: GuiAction) -> Distribution:
        if state.is_dont_care:
            if action.action_type == "reinitialize" and action.params and action.params[0] in self.initial:
                return ((self.initial[action.params[0]], 1.0),)
            raise MissingTransition(f"no reinitialize target for {action.describe()!r}")
        key = (state.id, action.signature)
        if key not in self.transitions:
            raise MissingTransition(f"state {state.id!r} has no transition for {action.describe()!r}")
        return self.transitions[key]


def _fail(source: str, message: str) -> ModelError:
    return ModelError(f"{source}: {message}")


def _check_widget(raw: object, state_id: str, screen: tuple[int, int], source: str) -> Widget:
    if not isinstance(raw, dict) or not isinstance(raw.get("objectID"), str) or not raw["objectID"]:
        raise _fail(source, f"state {state_id!r}: widget needs a nonempty 'objectID'")
    bounds = raw.get("bounds")
    if (
        not isinstance(bounds, list)
        or len(bounds) != 4
        or not all(isinstance(v, int) and not isinstance(v, bool) for v in bounds)
    ):
        raise _fail(source, f"state {state_id!r}: widget {raw['objectID']!r} needs integer bounds [x1,y1,x2,y2]")
    x1, y1, x2, y2 = bounds
    width, height = screen
    if not (0 <= x1 < x2 <= width and 0 <= y1 < y2 <= height):
        raise _fail(
            source,
            f"state {state_id!r}: widget {raw['objectID']!r} bounds {bounds} degenerate or outside {screen}",
        )
    checked = raw.get("checked")
    if checked is not None and not isinstance(checked, bool):
        raise _fail(source, f"state {state_id!r}: widget {raw['objectID']!r} 'checked' must be a boolean")
    text = raw.get("text", "")
    if not isinstance(text, str):
        raise _fail(source, f"state {state_id!r}: widget {raw['objectID']!r} 'text' must be a string")
    return Widget(raw["objectID"], text, (x1, y1, x2, y2), checked)


def _check_action(
    raw: object,
    state_id: str,
    widgets: dict[str, Widget],
    source: str,
) -> tuple[GuiAction, list[tuple[str, float]]]:
    if not isinstance(raw, dict) or not isinstance(raw.get("type"), str) or not raw["type"]:
        raise _fail(source, f"state {state_id!r}: action needs a nonempty 'type'")
    action_type = raw["type"]
    if action_type == "reinitialize":
        raise _fail(source, f"state {state_id!r}: reinitialize is only available in the don't-care state")
    target = ""
    detail = ""
    if "on" in raw:
        if raw["on"] not in widgets:
            raise _fail(source, f"state {state_id!r}: action {action_type!r} targets unknown widget {raw['on']!r}")
        widget = widgets[raw["on"]]
        target = widget.object_id
        detail = widget.text
    raw_params = raw.get("params", [])
    if not isinstance(raw_params, list) or not all(isinstance(p, (str, int)) for p in raw_params):
        raise _fail(source, f"state {state_id!r}: action {action_type!r} params must be strings or integers")
    params = tuple(str(p) for p in raw_params)
    if action_type == "click":
        if not target:
            raise _fail(source, f"state {state_id!r}: click actions need an 'on' widget reference")
        if params:
            raise _fail(source, f"state {state_id!r}: click params are derived from the widget center")
        params = tuple(str(c) for c in widgets[target].center)
    raw_transitions = raw.get("transitions")
    if not isinstance(raw_transitions, list) or not raw_transitions:
        raise _fail(source, f"state {state_id!r}: action {action_type!r} needs a nonempty 'transitions' list")
    arrows: list[tuple[str, float]] = []
    for entry in raw_transitions:
        if not isinstance(entry, dict) or not isinstance(entry.get("to"), str):
            raise _fail(source, f"state {state_id!r}: action {action_type!r} transition needs a 'to' state id")
        weight = entry.get("weight", 1.0)
        if isinstance(weight, bool) or not isinstance(weight, (int, float)) or weight <= 0:
            raise _fail(source, f"state {state_id!r}: action {action_type!r} transition weight must be positive")
        arrows.append((entry["to"], float(weight)))
    total = sum(w for _, w in arrows)
    if abs(total - 1.0) > 1e-9:
        raise _fail(
            source,
            f"state {state_id!r}: action {action_type!r} transition weights sum to {total:g}, expected 1",
        )
    return GuiAction(action_type, params, target, detail), arrows


def model_from_dict(data: object, source: str = "<model>") -> AppModel:
    """Build and validate a model from already-parsed JSON data."""
    if not isinstance(data, dict):
        raise _fail(source, "model must be a JSON object")
    screen_raw = data.get("screen")
    if (
        not isinstance(screen_raw, list)
        or len(screen_raw) != 2
        or not all(isinstance(v, int) and not isinstance(v, bool) and v > 0 for v in screen_raw)
    ):
        raise _fail(source, "'screen' must be a pair of positive integers")
    screen = (screen_raw[0], screen_raw[1])
    initial_raw = data.get("initial")
    if (
        not isinstance(initial_raw, dict)
        or not initial_raw
        or not all(isinstance(k, str) and isinstance(v, str) for k, v in initial_raw.items())
    ):
        raise _fail(source, "'initial' must map at least one launchable activity to a state id")
    states_raw = data.get("states")
    if not isinstance(states_raw, list) or not states_raw:
        raise _fail(source, "'states' must be a nonempty list")

    states: dict[str, GuiState] = {}
    enabled: dict[str, tuple[GuiAction, ...]] = {}
    transitions: dict[tuple[str, ActionSig], Distribution] = {}
    pending: list[tuple[str, str, str]] = []  # (state, action description, target)

    for raw_state in states_raw:
        if not isinstance(raw_state, dict) or not isinstance(raw_state.get("id"), str) or not raw_state["id"]:
            raise _fail(source, "every state needs a nonempty string 'id'")
        state_id = raw_state["id"]
        if state_id == DONT_CARE_ID:
            raise _fail(source, f"state id {DONT_CARE_ID!r} is reserved for the don't-care state")
        if state_id in states:
            raise _fail(source, f"duplicate state id {state_id!r}")
        attributes = raw_state.get("attributes")
        if not isinstance(attributes, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in attributes.items()
        ):
            raise _fail(source, f"state {state_id!r}: 'attributes' must map strings to strings")
        for required in ("activity", "package"):
            if required not in attributes:
                raise _fail(source, f"state {state_id!r}: missing required attribute {required!r}")
        widgets: dict[str, Widget] = {}
        for raw_widget in raw_state.get("widgets", []):
            widget = _check_widget(raw_widget, state_id, screen, source)
            if widget.object_id in widgets:
                raise _fail(source, f"state {state_id!r}: duplicate widget id {widget.object_id!r}")
            widgets[widget.object_id] = widget
        raw_actions = raw_state.get("actions")
        if not isinstance(raw_actions, list) or not raw_actions:
            raise _fail(source, f"state {state_id!r}: needs at least one enabled action")
        actions: list[GuiAction] = []
        seen_visible: set[tuple[str, tuple[str, ...]]] = set()
        for raw_action in raw_actions:
            action, arrows = _check_action(raw_action, state_id, widgets, source)
            if (action.action_type, action.params) in seen_visible:
                raise _fail(
                    source,
                    f"state {state_id!r}: duplicate action {action.describe()!r}",
                )
            seen_visible.add((action.action_type, action.params))
            actions.append(action)
            transitions[(state_id, action.signature)] = tuple(arrows)
            pending.extend((state_id, action.describe(), to) for to, _ in arrows)
        states[state_id] = GuiState(state_id, dict(attributes), tuple(widgets.values()))
        enabled[state_id] = tuple(sorted(actions, key=lambda a: a.signature))

    for state_id, description, target in pending:
        if target not in states:
            raise _fail(source, f"state {state_id!r}: action {description!r} targets unknown state {target!r}")
    for activity, target in initial_raw.items():
        if target not in states:
            raise _fail(source, f"initial activity {activity!r} targets unknown state {target!r}")

    return AppModel(screen, dict(initial_raw), states, enabled, transitions)


def load_model(path: str | Path) -> AppModel:
    """Load and validate a model file."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelError(f"{path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return model_from_dict(data, source=str(path))


class EnvSession:
    """Single-owner episode driver over a shared immutable model.

    The successor of a stochastic transition is sampled from the session's
    own seeded generator, so a fixed seed replays the same state sequence
    for the same action sequence.
    """

    def __init__(self, model: AppModel, seed: int = 0):
        self.model = model
        self._rng = random.Random(seed)
        self.current = DONT_CARE
        self.step_count = 0

    def reset(self) -> None:
        self.current = DONT_CARE
        self.step_count = 0

    def enabled_actions(self) -> list[GuiAction]:
        return list(self.model.enabled_in(self.current))

    def execute(self, action: GuiAction) -> GuiState:
        if action.signature not in {a.signature for a in self.model.enabled_in(self.current)}:
            raise ActionNotEnabled(
                f"{action.describe()!r} is not enabled in state {self.current.id!r}"
            )
        distribution = self.model.transition(self.current, action)
        if len(distribution) == 1:
            target = distribution[0][0]
        else:
            roll = self._rng.random()
            acc = 0.0
            target = distribution[-1][0]
            for state_id, weight in distribution:
                acc += weight
                if roll < acc:
                    target = state_id
                    break
        self.current = self.model.states[target]
        self.step_count += 1
        return self.current


def state_labeling(state: GuiState, alphabet: Iterable[AtomicProposition]) -> Labeling:
    """Predicates from the alphabet that hold on the state's attributes and widgets."""
    matched = set()
    for ap in alphabet:
        if ap.is_action:
            continue
        if _state_matches(state, ap):
            matched.add(ap)
    return Labeling(frozenset(matched))


def _state_matches(state: GuiState, ap: AtomicProposition) -> bool:
    if ap.key == "text":
        return any(ap.matches(w.text) for w in state.widgets)
    if ap.key == "objectID":
        return any(ap.matches(w.object_id) for w in state.widgets)
    if ap.key == "checked":
        return any(
            w.checked is not None and ap.matches("true" if w.checked else "false")
            for w in state.widgets
        )
    value = state.attributes.get(ap.key)
    return value is not None and ap.matches(value)


def action_labeling(action: GuiAction, alphabet: Iterable[AtomicProposition]) -> Labeling:
    """Predicates from the alphabet that hold on the action, known before execution."""
    matched = set()
    for ap in alphabet:
        if not ap.is_action:
            continue
        if ap.key == "actionType":
            hit = ap.matches(action.action_type)
        elif ap.key == "actionDetail":
            hit = ap.matches(action.detail)
        elif ap.key == "actionObjectID":
            hit = bool(action.target) and ap.matches(action.target)
        else:
            hit = False
        if hit:
            matched.add(ap)
    return Labeling(frozenset(matched))


def save_test(path: str | Path, actions: Sequence[GuiAction]) -> None:
    """Write a replayable test file: the ordered action records of a trace."""
    records = [{"type": a.action_type, "params": list(a.params)} for a in actions]
    Path(path).write_text(json.dumps(records, indent=2) + "\n", encoding="utf-8")


def load_test(path: str | Path) -> list[tuple[str, tuple[str, ...]]]:
    """Read a replayable test file back as (type, params) records."""
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ModelError(f"{path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ModelError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, list):
        raise ModelError(f"{path}: test file must be a JSON list of action records")
    records = []
    for index, entry in enumerate(data):
        if (
            not isinstance(entry, dict)
            or not isinstance(entry.get("type"), str)
            or not isinstance(entry.get("params", []), list)
        ):
            raise ModelError(f"{path}: record {index} must be {{'type': ..., 'params': [...]}}")
        records.append((entry["type"], tuple(str(p) for p in entry.get("params", []))))
    return records
