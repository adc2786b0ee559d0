"""Command-line pipeline runner.

Subcommands validate input files, run the individual analysis stages or
the whole pipeline, render stimuli, and serve the HTTP API. All
randomness is controlled by --seed (default 0); identical invocations
produce byte-identical outputs. Exit codes: 0 success, 1 validation
failure, 2 runtime error.
"""
from __future__ import annotations

import json
import sys
from pathlib import Path

import click
import numpy as np

from . import __version__
from .appeal import ANALYTIC, AS_PRINTED, AppealModel, FitOptions, Observation, fit_appeal_model
from .core import (
    Session,
    load_appeal,
    load_dims,
    load_matrix,
    load_rules,
    validate_dissimilarity,
)
from .core.fixtures import fixture_dir, load_fixture_template
from .core.session import Session as SessionModel
from .core.types import DesignParams, Product
from .errors import FormsenseError, ParseError
from .figures import appeal_vector_svg, iso_lines_svg, perceptual_map_svg, surface_colormap_svg
from .geometry import ProfileTemplate, apply_rule, generate_profile, profile_svg, revolve
from .mds import MdsOptions, fit_mds
from .pipeline import PipelineSettings, render_report, run_pipeline
from .prefmap import fit_vector_model
from .surface import iso_appeal_lines, response_surface, surface_grid

VALIDATION_EXIT = 1
RUNTIME_EXIT = 2


def main(argv=None):
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.UsageError as exc:
        click.echo(f"error: {exc.format_message()}", err=True)
        return RUNTIME_EXIT
    except ParseError as exc:
        click.echo(f"validation error: {exc}", err=True)
        return VALIDATION_EXIT
    except _ValidationFailure as exc:
        click.echo(f"validation error: {exc}", err=True)
        return VALIDATION_EXIT
    except ValueError as exc:
        click.echo(f"validation error: {exc}", err=True)
        return VALIDATION_EXIT
    except FormsenseError as exc:
        click.echo(f"error: {exc.__class__.__name__}: {exc}", err=True)
        return RUNTIME_EXIT
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        return RUNTIME_EXIT


class _ValidationFailure(Exception):
    pass


@click.group()
@click.version_option(version=__version__, prog_name="formsense")
def cli():
    """Subjective evaluation of parametric glass forms."""


def _seed_option(function):
    return click.option("--seed", type=int, default=0, show_default=True,
                        help="Seed for all randomized steps.")(function)


@cli.command()
@click.argument("dissim", type=click.Path(exists=True, path_type=Path))
@click.option("--appeal", type=click.Path(exists=True, path_type=Path))
@click.option("--rules", "rules_path", type=click.Path(exists=True, path_type=Path))
def validate(dissim, appeal, rules_path):
    """Validate input files; exit 1 listing violations if any."""
    matrix = load_matrix(dissim.read_text())
    report = validate_dissimilarity(matrix)
    problems = list(report.violations)
    if appeal:
        scores = load_appeal(appeal.read_text())
        try:
            scores.require_complete(matrix.n)
        except ValueError as exc:
            problems.append(str(exc))
    if rules_path:
        rules = load_rules(rules_path.read_text())
        try:
            rules.require_complete(matrix.n)
        except ValueError as exc:
            problems.append(str(exc))
    if problems:
        raise _ValidationFailure("; ".join(problems))
    click.echo(f"ok: {matrix.n} products, {len(matrix)} observed pairs")


@cli.command()
@click.argument("dissim", type=click.Path(exists=True, path_type=Path))
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--restarts", type=int, default=20, show_default=True)
@_seed_option
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv",
              show_default=True)
@click.option("--out", type=click.Path(path_type=Path), default=Path("configuration.csv"),
              show_default=True)
def mds(dissim, k, restarts, seed, fmt, out):
    """Embed a dissimilarity file; writes the configuration CSV or JSON."""
    matrix = load_matrix(dissim.read_text())
    report = validate_dissimilarity(matrix)
    if not report.ok:
        raise _ValidationFailure("; ".join(report.violations))
    config = fit_mds(matrix, MdsOptions(K=k, restarts=restarts, seed=seed))
    if fmt == "json":
        out.write_text(json.dumps(config.to_dict(), indent=2, sort_keys=True) + "\n")
    else:
        out.write_text(config.to_csv())
    click.echo(f"stress: {config.stress:.6f}")
    click.echo(f"wrote {out}")


@cli.command()
@click.argument("config_csv", type=click.Path(exists=True, path_type=Path))
@click.argument("appeal_csv", type=click.Path(exists=True, path_type=Path))
@click.option("--p-level", type=float, default=0.01, show_default=True)
@click.option("--out", type=click.Path(path_type=Path), help="Write the fit as JSON.")
def prefmap(config_csv, appeal_csv, p_level, out):
    """Fit the appeal vector model on a configuration."""
    config = _read_configuration(config_csv)
    scores = load_appeal(appeal_csv.read_text())
    fit = fit_vector_model(config, scores, p_levels=(p_level, 0.05))
    payload = json.dumps(fit.to_dict(), indent=2, sort_keys=True) + "\n"
    if out:
        out.write_text(payload)
    click.echo(payload.rstrip("\n"))


@cli.command()
@click.argument("appeal_csv", type=click.Path(exists=True, path_type=Path))
@click.argument("rules_csv", type=click.Path(exists=True, path_type=Path))
@click.option("--starts", type=int, default=50, show_default=True)
@_seed_option
@click.option("--k-nonneg", is_flag=True,
              help="Constrain the proportionality factors to be nonnegative.")
@click.option("--derivatives-as-printed", "as_printed", is_flag=True,
              help="Use the historical printed derivative variant instead "
                   "of the exact gradient (comparison runs).")
@click.option("--out", type=click.Path(path_type=Path), default=Path("appeal_model.json"),
              show_default=True)
def fit(appeal_csv, rules_csv, starts, seed, k_nonneg, as_printed, out):
    """Fit the quadratic appeal model to scores and rule judgments."""
    scores = load_appeal(appeal_csv.read_text())
    rules = load_rules(rules_csv.read_text())
    dims = load_dims(rules_csv.read_text())
    observations = [
        Observation(dims=dims[pid], appeal=scores[pid], deltas=rules.deltas(pid))
        for pid in sorted(dims)
    ]
    model, diagnostics = fit_appeal_model(
        observations,
        FitOptions(starts=starts, seed=seed, k_nonneg=k_nonneg,
                   gradient_kind=AS_PRINTED if as_printed else ANALYTIC),
    )
    out.write_text(json.dumps({"model": model.to_dict(),
                               "diagnostics": diagnostics.to_dict()},
                              indent=2, sort_keys=True) + "\n")
    click.echo(f"objective: {diagnostics.objective:.6f}")
    click.echo(f"wrote {out}")


@cli.command()
@click.argument("model_json", type=click.Path(exists=True, path_type=Path))
@click.option("--d1", type=float, default=8.0, show_default=True)
@click.option("--d2-range", nargs=2, type=float, default=(3.0, 7.0), show_default=True)
@click.option("--d3-range", nargs=2, type=float, default=(6.0, 9.5), show_default=True)
@click.option("--levels", type=str, default="",
              help="Comma-separated iso-appeal levels (default: 5 evenly spaced).")
@click.option("--resolution", type=int, default=50, show_default=True)
@click.option("--out-dir", type=click.Path(path_type=Path), default=Path("."),
              show_default=True)
def surface(model_json, d1, d2_range, d3_range, levels, resolution, out_dir):
    """Render the response surface colormap and iso-appeal lines."""
    data = json.loads(model_json.read_text())
    model = AppealModel.from_dict(data["model"] if "model" in data else data)
    surf = response_surface(model, d1)
    grid = surface_grid(surf, d2_range, d3_range, resolution)
    if levels:
        level_values = tuple(float(v) for v in levels.split(","))
    else:
        lo, hi = float(grid.values.min()), float(grid.values.max())
        level_values = tuple(np.round(np.linspace(lo, hi, 7)[1:-1], 3))
    iso = iso_appeal_lines(surf, level_values, (d2_range, d3_range), resolution)
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "surface_colormap.svg").write_text(surface_colormap_svg(grid))
    (out_dir / "iso_lines.svg").write_text(iso_lines_svg(iso))
    (out_dir / "surface_grid.csv").write_text(grid.csv())
    click.echo(f"wrote {out_dir / 'surface_colormap.svg'}")
    click.echo(f"wrote {out_dir / 'iso_lines.svg'}")


@cli.command()
@click.option("--template", "template_path", type=click.Path(exists=True, path_type=Path),
              help="Profile template JSON (default: bundled template).")
@click.option("--dims", nargs=3, type=float, required=True, metavar="D1 D2 D3")
@click.option("--rule", type=click.Choice(["R1", "R2", "R3"]))
@click.option("--delta", type=float, default=None,
              help="Rule increment in cm (default: 10%% of the dimension).")
@click.option("--out", type=click.Path(path_type=Path), default=Path("profile.svg"),
              show_default=True)
@click.option("--stl", type=click.Path(path_type=Path),
              help="Also export the revolved mesh as ASCII STL.")
def render(template_path, dims, rule, delta, out, stl):
    """Render a glass profile (optionally after a shape rule) as SVG."""
    if template_path:
        template = ProfileTemplate.from_json(template_path.read_text())
    else:
        template = ProfileTemplate.from_dict(load_fixture_template())
    params = DesignParams(*dims)
    if rule:
        if delta is None:
            current = {"R1": params.d1, "R2": params.d2, "R3": params.d3}[rule]
            delta = 0.1 * current
        params = apply_rule(params, rule, delta)
    shape = generate_profile(template, params)
    out.write_text(profile_svg(shape))
    click.echo(f"wrote {out}")
    if stl:
        stl.write_text(revolve(shape, 128).to_stl())
        click.echo(f"wrote {stl}")


@cli.command()
@click.option("--dissim", type=click.Path(exists=True, path_type=Path))
@click.option("--appeal", "appeal_path", type=click.Path(exists=True, path_type=Path))
@click.option("--rules", "rules_path", type=click.Path(exists=True, path_type=Path))
@click.option("--session", "session_path", type=click.Path(exists=True, path_type=Path),
              help="Analyze an exported session.json instead of raw CSVs.")
@click.option("--k", type=int, default=2, show_default=True)
@click.option("--restarts", type=int, default=20, show_default=True)
@click.option("--starts", type=int, default=50, show_default=True)
@_seed_option
@click.option("--out-dir", type=click.Path(path_type=Path), default=Path("report"),
              show_default=True)
def report(dissim, appeal_path, rules_path, session_path, k, restarts, starts, seed, out_dir):
    """Run the full pipeline and emit the report plus all figures.

    With no inputs, runs on the bundled study fixtures.
    """
    session = _assemble_session(dissim, appeal_path, rules_path, session_path)
    settings = PipelineSettings(k=k, restarts=restarts, fit_starts=starts, seed=seed)
    result = run_pipeline(session, settings, out_dir=out_dir)
    click.echo(render_report(result).rstrip("\n"))


@cli.command()
@click.option("--port", type=int, default=8000, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--store", type=click.Path(path_type=Path), default=Path("sessions"),
              show_default=True, help="Directory for persisted sessions.")
def serve(port, host, store):
    """Serve the assessment HTTP API (and the UI when built)."""
    import uvicorn

    from .service import create_app

    uvicorn.run(create_app(store), host=host, port=port, log_level="info")


def _assemble_session(dissim, appeal_path, rules_path, session_path) -> Session:
    if session_path:
        return SessionModel.from_json(session_path.read_text())
    if not (dissim and appeal_path and rules_path):
        base = fixture_dir()
        dissim = dissim or base / "dissim.csv"
        appeal_path = appeal_path or base / "appeal.csv"
        rules_path = rules_path or base / "rules.csv"
    matrix = load_matrix(dissim.read_text())
    report_ = validate_dissimilarity(matrix)
    if not report_.ok:
        raise _ValidationFailure("; ".join(report_.violations))
    scores = load_appeal(appeal_path.read_text())
    rules = load_rules(rules_path.read_text())
    dims = load_dims(rules_path.read_text())
    products = [Product(id=pid, label=f"G{pid}", dims=d) for pid, d in sorted(dims.items())]
    session = SessionModel(id="cli", products=products)
    for i, j, v in matrix.observed_pairs():
        session.record_comparison(i, j, v)
    session.complete_stage1()
    session.set_appeal(scores.scores)
    session.set_rules({pid: rules.deltas(pid) for pid in sorted(dims)})
    return session


def _read_configuration(path: Path):
    from .mds import PerceptualConfiguration

    lines = path.read_text().strip().splitlines()
    header = lines[0].split(",")
    k = len(header) - 1
    ids, rows = [], []
    for line in lines[1:]:
        cells = line.split(",")
        ids.append(int(cells[0]))
        rows.append([float(c) for c in cells[1:]])
    points = np.array(rows)
    config = PerceptualConfiguration(points=points, K=k, stress=0.0,
                                     product_ids=tuple(ids))
    return config


if __name__ == "__main__":
    sys.exit(main())
