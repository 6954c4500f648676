"""Command-line client: desk-scale stand-ins for the tag-writing and
tag-scanning devices, plus the scenario runner and the server launcher.

All record operations go over HTTP to a running gateway (``nfcwine serve``);
the emulated tags themselves live in a local JSON wallet file so that scan
and write flows behave like real hardware sitting on the desk.
"""

from __future__ import annotations

import dataclasses
import json
import sys
from pathlib import Path

import click

from . import tagemu
from .gateway import ClientError, HttpClient, ServerConfig
from .gateway import serve as serve_gateway
from .hashing import DEFAULT_SALT
from .sim import Engine, load_scenario, reader
from .sim.scenario import ScenarioError

DEFAULT_SERVER_URL = "http://127.0.0.1:45678/NFCWine2013"


def _load_wallet(path: Path) -> dict[str, tagemu.EmulatedTag]:
    if not path.exists():
        return {}
    data = json.loads(path.read_text(encoding="utf-8"))
    return {name: tagemu.tag_from_dict(d) for name, d in data.items()}


def _save_wallet(path: Path, wallet: dict[str, tagemu.EmulatedTag]) -> None:
    data = {name: tagemu.tag_to_dict(tag) for name, tag in wallet.items()}
    path.write_text(json.dumps(data, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def _get_tag(wallet: dict, name: str) -> tagemu.EmulatedTag:
    if name not in wallet:
        raise click.ClickException(f"no tag named {name!r} in the wallet; run new-tag first")
    return wallet[name]


def _echo_json(obj) -> None:
    click.echo(json.dumps(obj, indent=2, sort_keys=True))


@click.group()
@click.option("--server-url", default=DEFAULT_SERVER_URL, show_default=True,
              envvar="NFCWINE_SERVER_URL", help="Gateway base URL.")
@click.option("--tag-file", default="tags.json", show_default=True,
              type=click.Path(path_type=Path), help="Local emulated-tag wallet.")
@click.pass_context
def main(ctx: click.Context, server_url: str, tag_file: Path) -> None:
    """Rolling-token wine authentication toolkit."""
    ctx.obj = {"client": HttpClient(server_url), "tag_file": tag_file}


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=45678, show_default=True, type=int)
@click.option("--base-path", default="/NFCWine2013", show_default=True)
@click.option("--journal", default=None, type=click.Path(),
              help="Journal file; state is replayed from it on startup.")
@click.option("--salt", default=DEFAULT_SALT)
@click.option("--fixed-date", default=None,
              help="Pin the clock to dd-MM-yyyy (deterministic histories).")
def serve(host, port, base_path, journal, salt, fixed_date) -> None:
    """Launch the HTTP gateway."""
    config = ServerConfig(host=host, port=port, base_path=base_path,
                          salt=salt, journal_path=journal, fixed_date=fixed_date)
    serve_gateway(config)


@main.command("create-wine")
@click.argument("title")
@click.argument("category")
@click.option("--producer", default="")
@click.option("--country", default="")
@click.option("--vintage", default=2012, type=int)
@click.option("--price", default=0.0, type=float)
@click.option("--description", default="")
@click.option("--pic", default="")
@click.pass_obj
def create_wine(obj, title, category, producer, country, vintage, price,
                description, pic) -> None:
    """Create a wine record on the server."""
    view = _call(obj, "createWine", {
        "wineTitle": title, "wineCategoryName": category, "producer": producer,
        "country": country, "vintage": vintage, "price": price,
        "wineDescription": description, "winePic": pic})
    _echo_json(view)


@main.command("register-partner")
@click.argument("name")
@click.option("--untrusted", is_flag=True, default=False)
@click.pass_obj
def register_partner(obj, name, untrusted) -> None:
    """Register a supply chain partner on the server."""
    _echo_json(_call(obj, "registerPartner", {"name": name, "trusted": not untrusted}))


@main.command("new-tag")
@click.argument("name")
@click.option("--model", default="NTAG203", show_default=True,
              type=click.Choice([m.value for m in tagemu.TagModel]))
@click.pass_obj
def new_tag(obj, name, model) -> None:
    """Mint a fresh emulated tag into the wallet."""
    wallet = _load_wallet(obj["tag_file"])
    if name in wallet:
        raise click.ClickException(f"tag {name!r} already exists")
    tag = tagemu.create_tag(tagemu.TagModel(model))
    wallet[name] = tag
    _save_wallet(obj["tag_file"], wallet)
    click.echo(f"created {model} tag {name!r} uid={tag.uid_hex}")


@main.command("write-tag")
@click.argument("wid", type=int)
@click.argument("tag_name")
@click.pass_obj
def write_tag(obj, wid, tag_name) -> None:
    """Bind a wine to a tag and write the first tag value."""
    wallet = _load_wallet(obj["tag_file"])
    tag = _get_tag(wallet, tag_name)
    try:
        result = reader.write_tag(obj["client"], wid, tag)
    except (ClientError, tagemu.TagError) as exc:
        _fail(exc)
    _save_wallet(obj["tag_file"], wallet)
    click.echo(f"wrote {result['message_octets']}-octet NDEF message; "
               f"tag value {result['tag_value']}")


@main.command()
@click.argument("tag_name")
@click.option("--buy", "mode", flag_value="buy",
              help="Buy the wine after the lookup.")
@click.option("--accept", "partner", type=int, default=None,
              help="Accept as this partner id after the lookup.")
@click.pass_obj
def scan(obj, tag_name, mode, partner) -> None:
    """Scan a tag: look the value up, rotate it, commit, then buy/accept."""
    wallet = _load_wallet(obj["tag_file"])
    tag = _get_tag(wallet, tag_name)
    scan_mode = "accept" if partner is not None else (mode or "lookup")
    try:
        outcome = reader.scan(obj["client"], tag, mode=scan_mode, partner_id=partner)
    except (ClientError, tagemu.TagError, reader.ReaderError) as exc:
        _fail(exc)
    _save_wallet(obj["tag_file"], wallet)
    _echo_json(dataclasses.asdict(outcome))


@main.command("verify-uid")
@click.argument("tag_name")
@click.pass_obj
def verify_uid(obj, tag_name) -> None:
    """Check the tag's factory UID against the registry."""
    wallet = _load_wallet(obj["tag_file"])
    tag = _get_tag(wallet, tag_name)
    try:
        result = reader.verify_uid(obj["client"], tag)
    except (ClientError, tagemu.TagError) as exc:
        _fail(exc)
    _echo_json(result)


@main.command("run-scenario")
@click.argument("scenario_file", type=click.Path(exists=True, path_type=Path))
@click.option("--seed", default=None, type=int, help="Override the file's seed.")
@click.option("--report", default=None, type=click.Path(path_type=Path),
              help="Also write the report JSON here.")
def run_scenario_cmd(scenario_file, seed, report) -> None:
    """Run a scenario file in-process and print the report."""
    try:
        scn = load_scenario(scenario_file)
    except ScenarioError as exc:
        raise click.ClickException(str(exc)) from exc
    if seed is not None:
        scn.seed = seed
    sim_report = Engine(scn).run()
    text = sim_report.to_json()
    click.echo(text)
    if report is not None:
        report.write_text(text + "\n", encoding="utf-8")
    if sim_report.invariant_violations:
        sys.exit(1)


def _call(obj, action: str, payload: dict) -> dict:
    try:
        return obj["client"].call(action, payload)
    except ClientError as exc:
        _fail(exc)


def _fail(exc: Exception) -> "None":
    detail = ""
    if isinstance(exc, ClientError) and isinstance(exc.body, dict):
        detail = f" ({exc.body.get('error')}: {exc.body.get('detail')})"
    raise click.ClickException(f"{exc}{detail}")


if __name__ == "__main__":
    main()
