"""Shared fixtures: deterministic registries and lifecycle shorthand."""

import datetime
import itertools

import pytest

from nfcwine.registry import Registry

FIXED_DATE = datetime.date(2014, 3, 19)
DATE_PREFIX = "19-03-2014"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    # expose per-phase outcomes so the acceptance gate can print PASS/FAIL
    outcome = yield
    report = outcome.get_result()
    setattr(item, "rep_" + report.when, report)


def make_registry(**kwargs) -> Registry:
    """Registry pinned to one date with sequential GUIDs."""
    counter = itertools.count()
    kwargs.setdefault("clock", lambda: FIXED_DATE)
    kwargs.setdefault("guid_factory", lambda: "%032d" % next(counter))
    return Registry(**kwargs)


@pytest.fixture
def registry() -> Registry:
    return make_registry()


def add_wine(reg: Registry, title: str = "Cabernet Sauvignon"):
    return reg.create_wine(title, "Red Wine", "Natural Wine",
                           "South Africa", 2012, 280.0)


def committed_scan(reg: Registry, value: str) -> str:
    """One full honest rotation; returns the new current value."""
    resp = reg.scan_lookup(value)
    assert resp.next_nfc_tag, f"scan of {value} did not propose a rotation"
    reg.commit_tag_update(value, resp.next_nfc_tag)
    return resp.next_nfc_tag
