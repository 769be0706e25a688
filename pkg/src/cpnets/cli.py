"""Command-line entry points.

Exit codes: 0 success, 1 validation/domain error, 2 exceeded computation
budget.  Report-producing subcommands (dims, simulate) render a chart
next to their CSV output.
"""

from __future__ import annotations

import csv
import json
import random
import sys
from pathlib import Path

import click

from . import classes as cls_mod
from .core import (
    BudgetExceeded,
    ClassSpec,
    Completeness,
    CpNet,
    Cpt,
    net_from_json,
    net_to_dict,
)
from .learners import (
    RobustStrategy,
    learn_kbounded_complete,
    learn_tree_complete,
    learn_with_corruption,
)
from .oracles import (
    CorruptionMode,
    OracleKind,
    OracleSession,
    sample_corruption_set,
    session_transcript,
)
from .teaching import (
    teaching_set_incomplete,
    teaching_set_maximal,
    teaching_set_universal,
    verify_teaching_set,
)
from .universal import (
    UniversalSet,
    construct_minimal,
    construct_product,
    universal_from_text,
    universal_to_text,
)


@click.group()
def main() -> None:
    """Learning and teaching toolkit for bounded acyclic CP-nets."""


def _run(fn, *args, **kwargs):
    try:
        return fn(*args, **kwargs)
    except BudgetExceeded as exc:
        click.echo(f"budget error: {exc}", err=True)
        sys.exit(2)
    except (ValueError, RuntimeError) as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)


def _same_net(a: CpNet, b: CpNet) -> bool:
    """Equality of variables and tables, ignoring the classes' parent bounds."""
    da, db = net_to_dict(a), net_to_dict(b)
    da.pop("k"), db.pop("k")
    return da == db


def _chart(path: Path, kind: str, data: dict) -> None:
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    title = data.pop("title", path.stem)
    fig, ax = plt.subplots(figsize=(6, 4))
    if kind == "bars":
        ax.bar(list(data.keys()), list(data.values()), color="#4878a8")
        ax.set_ylabel("value")
    else:
        ax.plot(data["x"], data["y"], marker="o", linewidth=1)
        ax.set_xlabel(data.get("xlabel", "trial"))
        ax.set_ylabel(data.get("ylabel", "queries"))
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path)
    plt.close(fig)


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--m", type=int, default=2, show_default=True)
@click.option("--k", type=int, required=True)
@click.option("--complete/--incomplete", "complete", default=True)
@click.option("--out", type=click.Path(path_type=Path), default=Path("dims.csv"), show_default=True)
def dims(n: int, m: int, k: int, complete: bool, out: Path) -> None:
    """Enumerate a class and report its dimensions and structural flags as CSV."""
    completeness = Completeness.COMPLETE_ONLY if complete else Completeness.ALLOW_INCOMPLETE
    spec = _run(ClassSpec, n, m, k, completeness)
    cls = _run(cls_mod.enumerate_class, spec)
    vcd = _run(cls_mod.vcd, cls)
    td_class = _run(cls_mod.td_class, cls)
    rtd = _run(cls_mod.rtd, cls)
    report = _run(cls_mod.structural_report, cls)
    row = {
        "n": n,
        "m": m,
        "k": k,
        "completeness": completeness.value,
        "instances": len(cls.instances),
        "concepts": len(cls),
        "vcd": vcd,
        "td": td_class,
        "rtd": rtd,
        **report,
    }
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(row))
        writer.writeheader()
        writer.writerow(row)
    _chart(
        out.with_suffix(".png"),
        "bars",
        {"vcd": vcd, "td": td_class, "rtd": rtd, "title": f"n={n} m={m} k={k}"},
    )
    click.echo(",".join(str(v) for v in row.values()))


@main.command()
@click.option("--target", type=click.Path(exists=True, path_type=Path), required=True)
@click.option(
    "--construction",
    type=click.Choice(["maximal", "universal", "incomplete"]),
    default="universal",
    show_default=True,
)
@click.option("--universal", "universal_file", type=click.Path(exists=True, path_type=Path))
@click.option("--verify", is_flag=True, help="check uniqueness against the enumerated class")
@click.option("--out", type=click.Path(path_type=Path))
def teach(target: Path, construction: str, universal_file: Path, verify: bool, out: Path) -> None:
    """Construct a teaching set for a CP-net and optionally verify it."""
    net = _run(net_from_json, target.read_text())
    spec = net.spec
    if construction == "maximal":
        ts = _run(teaching_set_maximal, net, spec)
    else:
        if universal_file is not None:
            u = _run(universal_from_text, universal_file.read_text(), spec.m, spec.k)
        else:
            u = construct_product(spec.m, spec.n - 1, spec.k)
        builder = teaching_set_universal if construction == "universal" else teaching_set_incomplete
        ts = _run(builder, net, spec, u)
    payload = [
        {"first": list(x.first), "second": list(x.second), "swapped": x.swapped, "label": label}
        for x, label in ts.examples
    ]
    text = json.dumps(payload, indent=2)
    if out:
        out.write_text(text)
    click.echo(text)
    if verify:
        cls = _run(cls_mod.enumerate_class, spec)
        ok = _run(verify_teaching_set, ts, cls)
        click.echo(f"verify: {'pass' if ok else 'fail'}")
        if not ok:
            sys.exit(1)


@main.command()
@click.option("--target", type=click.Path(exists=True, path_type=Path), required=True)
@click.option("--k", type=int, required=True)
@click.option(
    "--strategy", type=click.Choice(["none", "lim", "mal"]), default="none", show_default=True
)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--universal", "universal_file", type=click.Path(exists=True, path_type=Path))
@click.option("--out", type=click.Path(path_type=Path))
@click.option("--transcript", type=click.Path(path_type=Path))
def learn(target, k, strategy, seed, universal_file, out, transcript) -> None:
    """Simulate a learning run against the given target net."""
    net = _run(net_from_json, Path(target).read_text())
    spec = ClassSpec(net.spec.n, net.spec.m, k, net.spec.completeness)
    u = None
    if universal_file is not None:
        u = _run(universal_from_text, Path(universal_file).read_text(), spec.m, spec.k)
    elif k > 1 or strategy == "none":
        u = construct_product(spec.m, spec.n - 1, spec.k)

    if strategy == "none":
        session = OracleSession(OracleKind.PERFECT, spec, target=net)
        result = _run(
            learn_tree_complete if k <= 1 else learn_kbounded_complete,
            session,
            spec,
            *((u,) if k > 1 else ()),
        )
    else:
        mode = CorruptionMode.LIMITED_BOUND if strategy == "lim" else CorruptionMode.MALICIOUS_BOUND
        corruption = _run(sample_corruption_set, spec, net, mode, seed)
        kind = OracleKind.LIMITED if strategy == "lim" else OracleKind.MALICIOUS
        session = OracleSession(kind, spec, target=net, corruption=corruption)
        robust = RobustStrategy.LIM if strategy == "lim" else RobustStrategy.MAL
        result = _run(learn_with_corruption, session, spec, robust, u if k > 1 else None)

    transcript_path = transcript or (Path(out).with_suffix(".transcript.json") if out else None)
    if transcript_path:
        Path(transcript_path).write_text(json.dumps(session_transcript(session), indent=2))
    payload = {
        "net": net_to_dict(result.net),
        "queries_used": result.queries_used,
        "exact": _same_net(result.net, net),
        "transcript": str(transcript_path) if transcript_path else None,
    }
    text = json.dumps(payload, indent=2)
    if out:
        Path(out).write_text(text)
    click.echo(text)
    if not payload["exact"]:
        sys.exit(1)


@main.command()
@click.option("--m", type=int, default=2, show_default=True)
@click.option("--z", type=int, required=True)
@click.option("--k", type=int, required=True)
@click.option("--minimal", is_flag=True, help="exact smallest set (search-based)")
@click.option("--out", type=click.Path(path_type=Path))
def universal(m: int, z: int, k: int, minimal: bool, out: Path) -> None:
    """Construct an (m, z, k)-universal set."""
    build = construct_minimal if minimal else construct_product
    u = _run(build, m, z, k)
    text = universal_to_text(u)
    if out:
        out.write_text(text)
    click.echo(text, nl=False)


def _random_tree_net(spec: ClassSpec, rng: random.Random) -> CpNet:
    order = list(range(spec.n))
    rng.shuffle(order)
    cpts: list = [None] * spec.n
    for pos, v in enumerate(order):
        orders = [(0, 1), (1, 0)]
        if pos > 0 and rng.random() < 0.7:
            p = order[rng.randrange(pos)]
            first = rng.choice(orders)
            rows = {(0,): first, (1,): tuple(reversed(first))}
            cpts[v] = Cpt.from_rows(v, (p,), rows)
        else:
            cpts[v] = Cpt.from_rows(v, (), {(): rng.choice(orders)})
    return CpNet(spec, tuple(cpts))


@main.command()
@click.option("--n", type=int, required=True)
@click.option("--k", type=int, default=1, show_default=True)
@click.option(
    "--strategy", type=click.Choice(["lim", "mal"]), default="mal", show_default=True
)
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option(
    "--out", type=click.Path(path_type=Path), default=Path("simulate.csv"), show_default=True
)
def simulate(n: int, k: int, strategy: str, trials: int, seed: int, out: Path) -> None:
    """Seeded corruption-robust learning trials; per-trial CSV plus a chart."""
    if k != 1:
        click.echo("error: only tree targets (k=1) are simulated", err=True)
        sys.exit(1)
    spec = _run(ClassSpec, n, 2, k)
    mode = CorruptionMode.LIMITED_BOUND if strategy == "lim" else CorruptionMode.MALICIOUS_BOUND
    kind = OracleKind.LIMITED if strategy == "lim" else OracleKind.MALICIOUS
    robust = RobustStrategy.LIM if strategy == "lim" else RobustStrategy.MAL
    rows = []
    for trial in range(trials):
        rng = random.Random(seed + trial)
        target = _random_tree_net(spec, rng)
        corruption = _run(sample_corruption_set, spec, target, mode, seed + trial)
        session = OracleSession(kind, spec, target=target, corruption=corruption)
        result = _run(learn_with_corruption, session, spec, robust)
        rows.append(
            {
                "trial": trial,
                "seed": seed + trial,
                "corrupted": len(corruption),
                "certificate": corruption.certificate(spec),
                "queries": result.queries_used,
                "exact": net_to_dict(result.net) == net_to_dict(target),
            }
        )
    out.parent.mkdir(parents=True, exist_ok=True)
    with out.open("w", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0]))
        writer.writeheader()
        writer.writerows(rows)
    _chart(
        out.with_suffix(".png"),
        "line",
        {
            "x": [r["trial"] for r in rows],
            "y": [r["queries"] for r in rows],
            "title": f"{strategy} recovery, n={n}",
        },
    )
    exact = sum(r["exact"] for r in rows)
    click.echo(f"{exact}/{trials} exact, report at {out}")
    if exact != trials:
        sys.exit(1)


@main.command()
@click.option("--port", type=int, default=8000, show_default=True, envvar="CPNETS_PORT")
@click.option("--host", default="127.0.0.1", show_default=True, envvar="CPNETS_HOST")
@click.option(
    "--data-dir", type=click.Path(path_type=Path), default=Path("sessions"), envvar="CPNETS_DATA"
)
def serve(port: int, host: str, data_dir: Path) -> None:
    """Run the elicitation session HTTP service."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(str(data_dir)), host=host, port=port)


if __name__ == "__main__":
    main()
