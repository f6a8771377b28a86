"""Flat ``key = value`` scenario files."""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path


class ScenarioError(ValueError):
    pass


def _int(s: str) -> int:
    return int(s)


def _bool(s: str) -> bool:
    v = s.strip().lower()
    if v in ("1", "true", "yes", "on"):
        return True
    if v in ("0", "false", "no", "off"):
        return False
    raise ValueError(f"not a boolean: {s!r}")


def _ints(s: str) -> tuple[int, ...]:
    return tuple(int(x) for x in s.replace(",", " ").split())


def _names(s: str) -> tuple[str, ...]:
    return tuple(x for x in s.replace(",", " ").split())


COMMON = {"kind": str, "output": str, "budget": _int, "seed": _int}

# per kind: (required keys, optional keys with defaults)
KINDS: dict[str, tuple[dict, dict]] = {
    "example1-sweep": ({"n_min": _int, "n_max": _int}, {"oracle": (_bool, True)}),
    "prop2": (
        {"p": _int, "k": _int, "q": _int, "r": _int, "c": _int, "indices": _ints},
        {"f": (_int, None), "wmax": (_int, 8), "oracles": (_bool, True)},
    ),
    "section-lemma": (
        {},
        {"input": (str, None), "p": (_int, None), "k": (_int, 1), "q": (_int, None), "r": (_int, None),
         "a": (_int, 2), "count": (_int, 10), "max_dim": (_int, 8)},
    ),
    "lemma-suite": ({}, {"groups": (_names, ("all",)), "rank_instances": (_int, 20)}),
    "lie-components": (
        {"k": _int},
        {"input": (str, None), "phi": (str, None), "h": (str, None), "r": (_int, None),
         "p": (_int, None), "a": (_int, None), "d": (_int, None), "count": (_int, 1)},
    ),
    "group-report": ({"group": str}, {}),
    "theorem2": (
        {"p": _int, "k": _int, "q": _int, "r": _int},
        {"ell": (_int, None), "copies": (_int, 1), "input": (str, None), "a": (_int, 2)},
    ),
}


def required_keys_message() -> str:
    parts = [f"  {kind}: kind, " + ", ".join(req) if req else f"  {kind}: kind" for kind, (req, _) in KINDS.items()]
    return "scenario needs 'kind' (one of " + ", ".join(KINDS) + ") and, per kind, the keys\n" + "\n".join(parts)


@dataclass
class Scenario:
    kind: str
    params: dict
    output: str | None = None
    budget: int | None = None
    seed: int = 0
    base: Path = field(default_factory=Path.cwd)

    def path(self, key: str) -> Path | None:
        v = self.output if key == "output" else self.params.get(key)
        if v is None:
            return None
        p = Path(v)
        return p if p.is_absolute() else self.base / p


def parse_scenario(text: str, base: Path | None = None) -> Scenario:
    raw: dict[str, str] = {}
    for no, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ScenarioError(f"line {no}: expected 'key = value', got {line!r}")
        key, value = (x.strip() for x in line.split("=", 1))
        if key in raw:
            raise ScenarioError(f"line {no}: duplicate key {key!r}")
        raw[key] = value
    if not raw:
        raise ScenarioError("empty scenario; " + required_keys_message())
    kind = raw.get("kind")
    if kind is None:
        raise ScenarioError("missing key 'kind'; " + required_keys_message())
    if kind not in KINDS:
        raise ScenarioError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    req, opt = KINDS[kind]
    unknown = sorted(set(raw) - set(COMMON) - set(req) - set(opt))
    if unknown:
        raise ScenarioError(f"unknown keys for {kind}: {', '.join(unknown)}")
    missing = [k for k in req if k not in raw]
    if missing:
        raise ScenarioError(f"{kind} needs keys: {', '.join(missing)}")
    params = {}
    try:
        for k, conv in req.items():
            params[k] = conv(raw[k])
        for k, (conv, default) in opt.items():
            params[k] = conv(raw[k]) if k in raw else default
        budget = _int(raw["budget"]) if "budget" in raw else None
        seed = _int(raw["seed"]) if "seed" in raw else 0
    except ValueError as e:
        raise ScenarioError(f"bad value: {e}") from None
    return Scenario(kind, params, raw.get("output"), budget, seed, base or Path.cwd())


def load_scenario(path: str | Path) -> Scenario:
    path = Path(path)
    return parse_scenario(path.read_text(), path.parent)
