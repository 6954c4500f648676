"""Scenario file format: line-delimited text with a versioned header.

Example::

    nfcwine-scenario v1
    seed 42
    fault drop-tag-write 0.2
    fault drop-commit 0.2
    actor consumer alice
    actor partner acme trusted
    actor counterfeiter mallory
    wine w1 "Cabernet Sauvignon" "Red Wine" "Natural Wine" "South Africa" 2012 280
    tag t1 NTAG203
    write-tag w1 t1
    scan t1 alice
    scan-retry t1 alice
    scan t1 alice buy
    transfer t1 acme
    clone t1 t2
    replay t1 0 t3
    double-scan t1 alice acme
    damage t1

Blank lines and ``#`` comments are ignored.  Tokens follow shell quoting.
Declarations (actor/wine/tag) may appear anywhere before first use.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, field
from pathlib import Path

HEADER = "nfcwine-scenario v1"

ACTOR_ROLES = ("winemaker", "partner", "consumer", "counterfeiter")
STEP_NAMES = ("write-tag", "scan", "scan-retry", "double-scan", "transfer",
              "buy", "accept", "clone", "replay", "damage", "verify-uid")


class ScenarioError(Exception):
    pass


@dataclass
class FaultPlan:
    p_drop_tag_write: float = 0.0
    p_drop_commit: float = 0.0

    def __post_init__(self) -> None:
        for name, p in (("drop-tag-write", self.p_drop_tag_write),
                        ("drop-commit", self.p_drop_commit)):
            if not 0.0 <= p <= 1.0:
                raise ScenarioError(f"fault probability {name}={p} outside [0, 1]")


@dataclass
class Scenario:
    seed: int = 0
    faults: FaultPlan = field(default_factory=FaultPlan)
    actors: dict[str, dict] = field(default_factory=dict)  # name -> {role, trusted}
    wines: dict[str, dict] = field(default_factory=dict)   # label -> create args
    tags: dict[str, str] = field(default_factory=dict)     # label -> model name
    steps: list[list[str]] = field(default_factory=list)

    def validate(self) -> None:
        declared_tags = set(self.tags)
        for step in self.steps:
            name = step[0]
            if name not in STEP_NAMES:
                raise ScenarioError(f"unknown step {name!r}")
            if name in ("clone", "replay"):
                # these mint new tags mid-run
                declared_tags.add(step[-1])
        for step in self.steps:
            name, args = step[0], step[1:]
            if name == "write-tag":
                wine, tag = args
                if wine not in self.wines:
                    raise ScenarioError(f"step references undeclared wine {wine!r}")
                if tag not in declared_tags:
                    raise ScenarioError(f"step references undeclared tag {tag!r}")
            elif name in ("scan", "scan-retry", "buy", "accept"):
                tag, actor = args[0], args[1]
                if tag not in declared_tags:
                    raise ScenarioError(f"step references undeclared tag {tag!r}")
                if actor not in self.actors:
                    raise ScenarioError(f"step references undeclared actor {actor!r}")
            elif name == "double-scan":
                tag, a, b = args
                if tag not in declared_tags:
                    raise ScenarioError(f"step references undeclared tag {tag!r}")
                for actor in (a, b):
                    if actor not in self.actors:
                        raise ScenarioError(f"step references undeclared actor {actor!r}")
            elif name in ("transfer",):
                tag, actor = args
                if tag not in declared_tags or actor not in self.actors:
                    raise ScenarioError(f"bad transfer {args}")
            elif name in ("damage", "verify-uid"):
                if args[0] not in declared_tags:
                    raise ScenarioError(f"step references undeclared tag {args[0]!r}")
            elif name in ("clone", "replay"):
                if args[0] not in declared_tags:
                    raise ScenarioError(f"step references undeclared tag {args[0]!r}")


def parse_scenario(text: str) -> Scenario:
    lines = text.splitlines()
    if not lines or lines[0].strip() != HEADER:
        raise ScenarioError(f"scenario must start with {HEADER!r}")
    scn = Scenario()
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            tokens = shlex.split(line)
        except ValueError as exc:
            raise ScenarioError(f"line {lineno}: {exc}") from exc
        kind, args = tokens[0], tokens[1:]
        try:
            _parse_line(scn, kind, args)
        except (ScenarioError, ValueError, IndexError) as exc:
            raise ScenarioError(f"line {lineno}: {exc}") from exc
    scn.validate()
    return scn


def _parse_line(scn: Scenario, kind: str, args: list[str]) -> None:
    if kind == "seed":
        scn.seed = int(args[0])
    elif kind == "fault":
        which, p = args[0], float(args[1])
        if which == "drop-tag-write":
            scn.faults = FaultPlan(p, scn.faults.p_drop_commit)
        elif which == "drop-commit":
            scn.faults = FaultPlan(scn.faults.p_drop_tag_write, p)
        else:
            raise ScenarioError(f"unknown fault {which!r}")
    elif kind == "actor":
        role, name = args[0], args[1]
        if role not in ACTOR_ROLES:
            raise ScenarioError(f"unknown role {role!r}")
        scn.actors[name] = {"role": role, "trusted": "trusted" in args[2:]}
    elif kind == "wine":
        label, title, category = args[0], args[1], args[2]
        producer = args[3] if len(args) > 3 else ""
        country = args[4] if len(args) > 4 else ""
        vintage = int(args[5]) if len(args) > 5 else 2012
        price = float(args[6]) if len(args) > 6 else 0.0
        scn.wines[label] = {
            "wineTitle": title, "wineCategoryName": category,
            "producer": producer, "country": country,
            "vintage": vintage, "price": price,
        }
    elif kind == "tag":
        scn.tags[args[0]] = args[1]
    elif kind in STEP_NAMES:
        scn.steps.append([kind, *args])
    else:
        raise ScenarioError(f"unknown directive {kind!r}")


def load_scenario(path: str | Path) -> Scenario:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))
