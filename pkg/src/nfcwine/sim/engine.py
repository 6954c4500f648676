"""Deterministic scenario engine with fault injection and adversaries.

Steps run single-threaded against an in-process registry through the same
dispatch table the HTTP gateway uses, so every request crosses the JSON
boundary.  All randomness (fault draws, tag UIDs, wine GUIDs) comes from
one seeded generator: identical (scenario, seed) pairs produce
byte-identical reports.  The registry invariant suite runs after every
step; any violation lands in the report.
"""

from __future__ import annotations

import datetime as _dt
import json
import random
from dataclasses import dataclass, field

from .. import tagemu
from ..gateway.client import ClientError, LocalClient
from ..registry import Registry
from . import reader
from .scenario import FaultPlan, Scenario, ScenarioError

FIXED_DATE = _dt.date(2014, 3, 19)
MAX_RETRY = 200


@dataclass
class SimReport:
    seed: int
    wines: dict[str, dict] = field(default_factory=dict)
    counters: dict[str, int] = field(default_factory=dict)
    events: list[str] = field(default_factory=list)
    invariant_violations: list[str] = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps({
            "seed": self.seed,
            "wines": self.wines,
            "counters": self.counters,
            "events": self.events,
            "invariant_violations": self.invariant_violations,
        }, sort_keys=True, indent=2)


class Engine:
    def __init__(self, scenario: Scenario, registry: Registry | None = None) -> None:
        scenario.validate()
        self.scenario = scenario
        self.rng = random.Random(scenario.seed)
        if registry is None:
            registry = Registry(clock=lambda: FIXED_DATE,
                                guid_factory=lambda: "%032x" % self.rng.getrandbits(128))
        self.registry = registry
        self.client = LocalClient(registry)

        self.tags: dict[str, tagemu.EmulatedTag] = {}
        self.tag_owner: dict[str, str] = {}
        self.tag_wine: dict[str, int] = {}          # tag label -> wid
        self.tag_value_log: dict[str, list[str]] = {}  # every value ever carried
        self.adversarial: set[str] = set()
        self.wine_ids: dict[str, int] = {}          # wine label -> wid
        self.partner_ids: dict[str, int] = {}
        self.attacked_wids: set[int] = set()

        self.counters = {
            "attacks_attempted": 0, "attacks_detected": 0, "attacks_undetected": 0,
            "false_invalidations": 0, "recoveries_case1": 0, "recoveries_case2": 0,
            "scans": 0, "retries": 0,
        }
        self.events: list[str] = []
        self.violations: list[str] = []

    # ------------------------------------------------------------------ setup

    def _new_uid(self) -> bytes:
        return self.rng.getrandbits(56).to_bytes(7, "big")

    def _setup(self) -> None:
        for name, info in self.scenario.actors.items():
            if info["role"] == "partner":
                resp = self.client.call("registerPartner",
                                        {"name": name, "trusted": info["trusted"]})
                self.partner_ids[name] = resp["partnerId"]
        for label, args in self.scenario.wines.items():
            view = self.client.call("createWine", args)
            self.wine_ids[label] = view["WID"]
        for label, model_name in self.scenario.tags.items():
            tag = tagemu.create_tag(tagemu.TagModel(model_name), uid=self._new_uid())
            self.tags[label] = tag
            self.tag_value_log[label] = []

    # ------------------------------------------------------------------ run

    def run(self) -> SimReport:
        self._setup()
        for step in self.scenario.steps:
            self._execute(step)
            self._check_invariants(step)
        self._finalize_counters()
        report = SimReport(seed=self.scenario.seed, counters=dict(self.counters),
                           events=list(self.events),
                           invariant_violations=list(self.violations))
        for label, wid in sorted(self.wine_ids.items()):
            wine = self.registry.wines[wid]
            report.wines[label] = {
                "wid": wid,
                "title": wine.wine_title,
                "status": "Valid" if wine.is_valid else "Invalid",
                "read_count": wine.read_count,
                "history": list(wine.history),
            }
        return report

    def _check_invariants(self, step: list[str]) -> None:
        for problem in self.registry.check_invariants():
            self.violations.append(f"after {' '.join(step)}: {problem}")

    def _draw_faults(self) -> tuple[bool, bool]:
        plan = self.scenario.faults
        return (self.rng.random() < plan.p_drop_tag_write,
                self.rng.random() < plan.p_drop_commit)

    def _execute(self, step: list[str]) -> None:
        name, args = step[0], step[1:]
        handler = getattr(self, "_step_" + name.replace("-", "_"))
        try:
            handler(*args)
        except (tagemu.TagError, reader.ReaderError, ClientError) as exc:
            # surfaced device/protocol errors are outcomes, not crashes
            self.events.append(f"{' '.join(step)}: error {type(exc).__name__}")

    # ------------------------------------------------------------------ steps

    def _step_write_tag(self, wine_label: str, tag_label: str) -> None:
        tag = self.tags[tag_label]
        wid = self.wine_ids[wine_label]
        result = reader.write_tag(self.client, wid, tag)
        self.tag_wine[tag_label] = wid
        self.tag_value_log[tag_label].append(result["tag_value"])
        self.events.append(f"write-tag {wine_label} {tag_label}: "
                           f"{result['message_octets']} octets")

    def _scan_once(self, tag_label: str, actor: str, mode: str = "lookup",
                   forced_faults: tuple[bool, bool] | None = None) -> reader.ScanOutcome:
        tag = self.tags[tag_label]
        drop_write, drop_commit = forced_faults or self._draw_faults()
        stats_before = dict(self.registry.stats)
        partner_id = self.partner_ids.get(actor)
        outcome = reader.scan(self.client, tag, mode=mode, partner_id=partner_id,
                              drop_tag_write=drop_write, drop_commit=drop_commit)
        if outcome.wrote_tag:
            self.tag_value_log[tag_label].append(outcome.next_tag)
        for branch, key in (("case1", "recoveries_case1"), ("case2", "recoveries_case2")):
            delta = self.registry.stats.get(branch, 0) - stats_before.get(branch, 0)
            self.counters[key] += delta
        self.counters["scans"] += 1
        if tag_label in self.adversarial:
            self.counters["attacks_attempted"] += 1
            if outcome.verdict in ("invalid", "unknown"):
                self.counters["attacks_detected"] += 1
            else:
                self.counters["attacks_undetected"] += 1
            wid = self._wid_of_value(outcome.scanned)
            if wid is not None:
                self.attacked_wids.add(wid)
        return outcome

    def _wid_of_value(self, value: str) -> int | None:
        if value in self.registry.archive:
            return self.registry.archive[value]
        for wine in self.registry.wines.values():
            if wine.nfc_current_tag == value:
                return wine.wid
        return None

    def _step_scan(self, tag_label: str, actor: str, mode: str = "lookup") -> None:
        outcome = self._scan_once(tag_label, actor, mode=mode)
        faults = "" if outcome.wrote_tag and outcome.committed else " (fault)"
        suffix = faults if outcome.verdict == "valid" else ""
        self.events.append(f"scan {tag_label} {actor} {mode}: {outcome.verdict}{suffix}")

    def _step_buy(self, tag_label: str, actor: str) -> None:
        # purchase follows an already-committed scan; no extra rotation here
        value = reader.read_tag_value(self.tags[tag_label])
        result = self.client.call("ConsumerBuyForWine", {"NFCTag": value})
        self.events.append(f"buy {tag_label} {actor}: "
                           f"{'sold' if result['isBuySuccess'] else result['reason']}")

    def _step_accept(self, tag_label: str, actor: str) -> None:
        value = reader.read_tag_value(self.tags[tag_label])
        result = self.client.call(
            "PartnerAcceptWine",
            {"NFCTag": value, "partnerId": self.partner_ids.get(actor)})
        self.events.append(f"accept {tag_label} {actor}: "
                           f"{'accepted' if result['isAccepted'] else result['reason']}")

    def _step_scan_retry(self, tag_label: str, actor: str, mode: str = "lookup") -> None:
        """One logical scan retried until tag and server are in sync again."""
        attempts = 0
        verdict = "unknown"
        while attempts < MAX_RETRY:
            outcome = self._scan_once(tag_label, actor, mode=mode)
            attempts += 1
            verdict = outcome.verdict
            if verdict != "valid" or self._quiescent(tag_label):
                break
        self.counters["retries"] += attempts - 1
        self.events.append(
            f"scan-retry {tag_label} {actor}: {verdict} after {attempts} attempt(s)")

    def _quiescent(self, tag_label: str) -> bool:
        wid = self.tag_wine.get(tag_label)
        if wid is None:
            return True
        if wid in self.registry.pending:
            return False
        try:
            on_tag = reader.read_tag_value(self.tags[tag_label])
        except Exception:
            return True  # unreadable tag cannot converge further
        return on_tag == self.registry.wines[wid].nfc_current_tag

    def _step_double_scan(self, tag_label: str, actor_a: str, actor_b: str) -> None:
        """Two readers race on the same current value; registry serializes."""
        tag = self.tags[tag_label]
        scanned = reader.read_tag_value(tag)
        stats_before = dict(self.registry.stats)
        resp_a = self.client.call("ConsumerFindForWine", {"NFCTag": scanned})
        resp_b = self.client.call("ConsumerFindForWine", {"NFCTag": scanned})
        self.counters["scans"] += 2
        self.counters["recoveries_case1"] += (
            self.registry.stats.get("case1", 0) - stats_before.get("case1", 0))
        converged = resp_a["nextNFCTag"] == resp_b["nextNFCTag"] != ""
        if converged:
            tagemu.write_ndef(tag, reader.encode_tag_value(resp_a["nextNFCTag"]))
            self.tag_value_log[tag_label].append(resp_a["nextNFCTag"])
            for old in (scanned, scanned):
                self.client.call("CommitTagUpdate",
                                 {"oldNFCTag": old, "newNFCTag": resp_a["nextNFCTag"]})
        self.events.append(
            f"double-scan {tag_label} {actor_a}/{actor_b}: "
            f"{'converged' if converged else 'diverged'}")

    def _step_transfer(self, tag_label: str, actor: str) -> None:
        self.tag_owner[tag_label] = actor
        self.events.append(f"transfer {tag_label} -> {actor}")

    def _step_clone(self, src_label: str, dst_label: str) -> None:
        clone = tagemu.clone_tag(self.tags[src_label], uid=self._new_uid())
        self.tags[dst_label] = clone
        self.tag_value_log[dst_label] = list(self.tag_value_log[src_label][-1:])
        self.adversarial.add(dst_label)
        self.events.append(f"clone {src_label} -> {dst_label}")

    def _step_replay(self, src_label: str, index: str, dst_label: str) -> None:
        """Counterfeiter writes a historical value of ``src`` onto fresh stock."""
        history = self.tag_value_log[src_label]
        value = history[int(index)]
        tag = tagemu.create_tag(tagemu.TagModel.NTAG203, uid=self._new_uid())
        tagemu.write_ndef(tag, reader.encode_tag_value(value))
        self.tags[dst_label] = tag
        self.tag_value_log[dst_label] = [value]
        self.adversarial.add(dst_label)
        self.events.append(f"replay {src_label}[{index}] -> {dst_label}")

    def _step_damage(self, tag_label: str) -> None:
        tagemu.damage_tag(self.tags[tag_label])
        self.events.append(f"damage {tag_label}")

    def _step_verify_uid(self, tag_label: str) -> None:
        result = reader.verify_uid(self.client, self.tags[tag_label])
        self.events.append(f"verify-uid {tag_label}: "
                           f"{'match' if result['isMatch'] else 'no match'}")

    # ------------------------------------------------------------------ wrap-up

    def _finalize_counters(self) -> None:
        for wid in self.wine_ids.values():
            wine = self.registry.wines[wid]
            sold = any(line.endswith(" sold") for line in wine.history)
            if not wine.is_valid and not sold and wid not in self.attacked_wids:
                self.counters["false_invalidations"] += 1
        attempted = self.counters["attacks_attempted"]
        accounted = self.counters["attacks_detected"] + self.counters["attacks_undetected"]
        if attempted != accounted:
            self.violations.append(
                f"attack accounting broken: {attempted} attempted, {accounted} classified")


def run_scenario(scenario: Scenario) -> SimReport:
    return Engine(scenario).run()


# ---------------------------------------------------------------------- canned builders

def make_fault_scenario(seed: int, p_drop_tag_write: float, p_drop_commit: float,
                        logical_scans: int = 3) -> Scenario:
    """One wine, one tag, N logical scans each retried to quiescence."""
    scn = Scenario(seed=seed, faults=FaultPlan(p_drop_tag_write, p_drop_commit))
    scn.actors["alice"] = {"role": "consumer", "trusted": False}
    scn.wines["w1"] = {"wineTitle": "Cabernet Sauvignon", "wineCategoryName": "Red Wine",
                       "producer": "Natural Wine", "country": "South Africa",
                       "vintage": 2012, "price": 280}
    scn.tags["t1"] = "NTAG203"
    scn.steps.append(["write-tag", "w1", "t1"])
    for _ in range(logical_scans):
        scn.steps.append(["scan-retry", "t1", "alice"])
    return scn


def make_attack_scenario(seed: int, kind: str) -> Scenario:
    """Clone/replay playbooks.

    - clone_after_commit: copy taken after a rotation committed; stale copy.
    - replay_archived: retired value written onto fresh stock.
    - clone_before_commit: copy taken before any rotation; passes once, and
      the stale side is flagged on its next scan after the other commits.
    """
    if kind not in ("clone_after_commit", "replay_archived", "clone_before_commit"):
        raise ScenarioError(f"unknown attack kind {kind!r}")
    scn = Scenario(seed=seed)
    scn.actors["alice"] = {"role": "consumer", "trusted": False}
    scn.actors["mallory"] = {"role": "counterfeiter", "trusted": False}
    scn.wines["w1"] = {"wineTitle": "Cabernet Sauvignon", "wineCategoryName": "Red Wine",
                       "producer": "Natural Wine", "country": "South Africa",
                       "vintage": 2012, "price": 280}
    scn.tags["t1"] = "NTAG203"
    scn.steps.append(["write-tag", "w1", "t1"])
    if kind == "clone_after_commit":
        scn.steps += [["scan", "t1", "alice"],
                      ["clone", "t1", "t2"],
                      ["scan", "t1", "alice"],
                      ["scan", "t2", "mallory"]]
    elif kind == "replay_archived":
        scn.steps += [["scan", "t1", "alice"],
                      ["scan", "t1", "alice"],
                      ["replay", "t1", "0", "t2"],
                      ["scan", "t2", "mallory"]]
    else:  # clone_before_commit
        scn.steps += [["clone", "t1", "t2"],
                      ["scan", "t2", "mallory"],   # passes: copy is indistinguishable
                      ["scan", "t1", "alice"],     # original now stale -> flagged
                      ["scan", "t2", "mallory"]]   # wine invalidated -> copy flagged too
    return scn
