"""Command-line interface.

Exit codes are stable for scripting: 0 success, 1 validation findings,
2 usage/config errors, 3 backend/transport failures.
"""

import json
import os
import sys
import tempfile
from pathlib import Path

import click

from putaway import core, evalharness, llmbackend, simworld
from putaway.evalharness import MethodKind, MethodSpec
from putaway.llmbackend import BackendConfig, BackendMode
from putaway.promptkit import (
    PromptError,
    Summary,
    build_category_extraction_prompt,
    build_primitive_summarization_prompt,
    build_receptacle_summarization_prompt,
    parse_object_list,
    parse_placements,
    parse_primitive_choices,
    parse_summary,
)

EXIT_OK = 0
EXIT_FINDINGS = 1
EXIT_USAGE = 2
EXIT_BACKEND = 3


def _fail(code: int, message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def atomic_write(path, text: str) -> None:
    """Write via a temp file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as f:
            f.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def backend_options(f):
    options = [
        click.option("--backend", "backend_mode", type=click.Choice(["http", "replay"]),
                     help="Completion backend mode."),
        click.option("--endpoint", "endpoint_url", help="HTTP completion endpoint URL."),
        click.option("--replay", "replay_path", type=click.Path(),
                     help="Replay store (.jsonl) for offline runs."),
        click.option("--cache", "cache_dir", type=click.Path(),
                     help="Write-through completion cache directory."),
        click.option("--model", "model_id", help="Model identifier sent to the backend."),
        click.option("--backend-config", "backend_config_path", type=click.Path(),
                     help="JSON backend config file (overrides the flags above)."),
    ]
    for opt in reversed(options):
        f = opt(f)
    return f


def resolve_backend_config(backend_mode, endpoint_url, replay_path, cache_dir,
                           model_id, backend_config_path) -> BackendConfig:
    if backend_config_path:
        if backend_mode or endpoint_url or replay_path or model_id:
            _fail(EXIT_USAGE, "--backend-config is mutually exclusive with other backend flags")
        try:
            return BackendConfig.from_file(backend_config_path)
        except llmbackend.ConfigError as e:
            _fail(EXIT_USAGE, str(e))
    if not backend_mode:
        _fail(EXIT_USAGE, "a backend is required (--backend http|replay or --backend-config)")
    if not model_id:
        _fail(EXIT_USAGE, "--model is required with --backend")
    if backend_mode == "http" and replay_path:
        _fail(EXIT_USAGE, "--replay conflicts with --backend http")
    if backend_mode == "replay" and endpoint_url:
        _fail(EXIT_USAGE, "--endpoint conflicts with --backend replay")
    try:
        return BackendConfig(
            mode=BackendMode(backend_mode),
            model_id=model_id,
            endpoint_url=endpoint_url,
            cache_dir=cache_dir,
            replay_path=replay_path,
        )
    except llmbackend.ConfigError as e:
        _fail(EXIT_USAGE, str(e))


@click.group()
@click.version_option(package_name="putaway")
def main():
    """Preference summarization benchmark and tidying simulator."""


@main.command()
@click.option("--dataset", "dataset_path", required=True, type=click.Path(),
              help="Benchmark dataset JSON file.")
def validate(dataset_path):
    """Validate a dataset file and print the findings."""
    try:
        text = Path(dataset_path).read_text(encoding="utf-8")
        ds = core.dataset_from_obj(json.loads(text))
    except (OSError, json.JSONDecodeError, core.ParseError) as e:
        _fail(EXIT_USAGE, f"cannot parse {dataset_path}: {e}")
    report = core.validate_dataset(ds)
    click.echo(report.render())
    sys.exit(EXIT_OK if report.empty else EXIT_FINDINGS)


def _load_examples_file(path):
    """Seen-block file: objects, receptacles, and seen placements/choices."""
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
        objects = tuple(obj["objects"])
        receptacles = tuple(obj.get("receptacles", ()))
        seen = tuple(
            core.Placement(e["object"], e["receptacle"])
            for e in obj["seen"]
            if "receptacle" in e
        )
        choices = tuple(
            core.PrimitiveChoice(e["object"], core.Primitive(e["primitive"]))
            for e in obj["seen"]
            if "primitive" in e
        )
    except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as e:
        raise core.ParseError(f"examples file {path}: {e}") from e
    if not obj["seen"]:
        raise core.ParseError(f"examples file {path}: empty seen block")
    return objects, receptacles, seen, choices


def _derive_rules(examples_path, backend, params) -> simworld.EpisodeRules:
    objects, receptacles, seen, choices = _load_examples_file(examples_path)
    rec_prompt = build_receptacle_summarization_prompt(objects, receptacles, seen)
    rec_summary = parse_summary(backend.complete(rec_prompt, params).completion)
    prim_prompt = build_primitive_summarization_prompt(objects, choices)
    prim_summary = parse_summary(backend.complete(prim_prompt, params).completion)
    cat_prompt = build_category_extraction_prompt(rec_summary)
    categories = parse_object_list(
        'objects = ["', backend.complete(cat_prompt, params).completion
    )
    return simworld.EpisodeRules(rec_summary, prim_summary, categories)


@main.command()
@click.option("--examples", "examples_path", required=True, type=click.Path(),
              help="Seen-block JSON file with example placements.")
@click.option("--mode", type=click.Choice(["receptacle", "primitive"]),
              default="receptacle", show_default=True)
@backend_options
def summarize(examples_path, mode, **backend_flags):
    """Summarize example preferences into a general rule."""
    config = resolve_backend_config(**backend_flags)
    try:
        objects, receptacles, seen, choices = _load_examples_file(examples_path)
    except core.ParseError as e:
        _fail(EXIT_USAGE, str(e))
    try:
        backend = llmbackend.make_backend(config)
        params = config.params()
        if mode == "receptacle":
            if not seen:
                _fail(EXIT_USAGE, "examples file has no receptacle placements")
            prompt = build_receptacle_summarization_prompt(objects, receptacles, seen)
            summary = parse_summary(backend.complete(prompt, params).completion)
            click.echo(f"summary: {summary.text}")
            cat_prompt = build_category_extraction_prompt(summary)
            categories = parse_object_list(
                'objects = ["', backend.complete(cat_prompt, params).completion
            )
            click.echo("categories: " + ", ".join(categories))
        else:
            if not choices:
                _fail(EXIT_USAGE, "examples file has no primitive annotations")
            prompt = build_primitive_summarization_prompt(objects, choices)
            summary = parse_summary(backend.complete(prompt, params).completion)
            click.echo(f"summary: {summary.text}")
    except PromptError as e:
        _fail(EXIT_USAGE, str(e))
    except llmbackend.BackendError as e:
        _fail(EXIT_BACKEND, str(e))
    sys.exit(EXIT_OK)


_METHOD_CHOICES = [k.value for k in MethodKind]


def _eval_common(dataset_path, method_name, workers, report_dir, backend_flags,
                 taxonomy_edges, taxonomy_synonyms, taxonomy_mapping,
                 embeddings, human_summaries, runner):
    kind = MethodKind(method_name)
    backend_config = None
    if kind in evalharness.LLM_KINDS:
        backend_config = resolve_backend_config(**backend_flags)
    try:
        ds = core.load_dataset(dataset_path)
    except core.DatasetError as e:
        _fail(EXIT_USAGE, f"dataset: {e}")
    try:
        method = MethodSpec(
            kind=kind,
            backend=backend_config,
            taxonomy_edges=taxonomy_edges,
            taxonomy_synonyms=taxonomy_synonyms,
            taxonomy_mapping=taxonomy_mapping,
            embedding_table=embeddings,
            human_summaries=human_summaries,
        )
        report = runner(ds, method, workers=workers)
    except (evalharness.HarnessError, llmbackend.ConfigError) as e:
        _fail(EXIT_USAGE, str(e))
    if report_dir:
        out = Path(report_dir)
        atomic_write(out / "report.json", report.to_json())
        atomic_write(out / "report.csv", report.to_csv())
        click.echo(f"wrote {out / 'report.json'} and {out / 'report.csv'}")
    click.echo(report.render_summary())
    anomalies = sum(len(r.anomalies) for r in report.results)
    if anomalies:
        click.echo(f"note: {anomalies} anomalies recorded across scenarios")
    sys.exit(EXIT_OK)


def eval_options(f):
    options = [
        click.option("--dataset", "dataset_path", required=True, type=click.Path()),
        click.option("--method", "method_name", required=True,
                     type=click.Choice(_METHOD_CHOICES)),
        click.option("--workers", type=int, default=1, show_default=True),
        click.option("--report", "report_dir", type=click.Path(),
                     help="Directory for report.json and report.csv."),
        click.option("--taxonomy-edges", type=click.Path()),
        click.option("--taxonomy-synonyms", type=click.Path()),
        click.option("--taxonomy-mapping", type=click.Path()),
        click.option("--embeddings", type=click.Path()),
        click.option("--human-summaries", type=click.Path()),
    ]
    for opt in reversed(options):
        f = opt(f)
    return f


@main.command(name="eval")
@eval_options
@backend_options
def eval_cmd(dataset_path, method_name, workers, report_dir, taxonomy_edges,
             taxonomy_synonyms, taxonomy_mapping, embeddings, human_summaries,
             **backend_flags):
    """Run the receptacle-selection benchmark."""
    _eval_common(dataset_path, method_name, workers, report_dir, backend_flags,
                 taxonomy_edges, taxonomy_synonyms, taxonomy_mapping, embeddings,
                 human_summaries, evalharness.run_benchmark)


@main.command(name="eval-primitives")
@eval_options
@backend_options
def eval_primitives(dataset_path, method_name, workers, report_dir, taxonomy_edges,
                    taxonomy_synonyms, taxonomy_mapping, embeddings, human_summaries,
                    **backend_flags):
    """Run the primitive-selection benchmark."""
    _eval_common(dataset_path, method_name, workers, report_dir, backend_flags,
                 taxonomy_edges, taxonomy_synonyms, taxonomy_mapping, embeddings,
                 human_summaries, evalharness.run_primitive_benchmark)


@main.command()
@click.option("--scenario", "scenario_path", required=True, type=click.Path(),
              help="Simulator world JSON file.")
@click.option("--rules", "rules_path", type=click.Path(),
              help="Rules JSON (summaries + categories).")
@click.option("--derive-rules", is_flag=True,
              help="Derive rules from --examples via the LLM pipeline.")
@click.option("--examples", "examples_path", type=click.Path(),
              help="Seen-block file for --derive-rules.")
@click.option("--config", "config_path", type=click.Path(),
              help="SimConfig JSON file (defaults used when omitted).")
@click.option("--seed", type=int, default=None, help="Override the config RNG seed.")
@click.option("--trace", "trace_path", type=click.Path(),
              help="Write one JSON record per loop iteration to this file.")
@backend_options
def simulate(scenario_path, rules_path, derive_rules, examples_path, config_path,
             seed, trace_path, **backend_flags):
    """Run one tidying episode."""
    if bool(rules_path) == bool(derive_rules):
        _fail(EXIT_USAGE, "exactly one of --rules or --derive-rules is required")
    if derive_rules and not examples_path:
        _fail(EXIT_USAGE, "--derive-rules requires --examples")
    config = resolve_backend_config(**backend_flags)
    try:
        cfg = simworld.SimConfig.from_file(config_path) if config_path else simworld.SimConfig()
        if seed is not None:
            cfg = simworld.SimConfig(**{**cfg.__dict__, "rng_seed": seed})
        world = simworld.load_world(scenario_path)
    except simworld.SimError as e:
        _fail(EXIT_USAGE, str(e))
    try:
        backend = llmbackend.make_backend(config)
        params = config.params()
        if derive_rules:
            rules = _derive_rules(examples_path, backend, params)
            click.echo(f"derived receptacle rules: {rules.receptacle_summary.text}")
            click.echo(f"derived primitive rules: {rules.primitive_summary.text}")
            click.echo("categories: " + ", ".join(rules.categories))
        else:
            rules = simworld.EpisodeRules.from_file(rules_path)
        log = simworld.run_episode(world, rules, backend, cfg, params=params)
    except (llmbackend.BackendError, PromptError) as e:
        _fail(EXIT_BACKEND, str(e))
    except simworld.SimError as e:
        _fail(EXIT_USAGE, str(e))
    if trace_path:
        lines = "".join(
            json.dumps(rec, sort_keys=True, separators=(",", ":")) + "\n"
            for rec in log.trace
        )
        atomic_write(trace_path, lines)
        click.echo(f"wrote trace to {trace_path}")
    click.echo(json.dumps(log.to_json_obj(), indent=2, sort_keys=True))
    click.echo(f"overall put-away fraction: {log.overall_fraction:.2f}")
    sys.exit(EXIT_OK)


@main.command()
@click.option("--scenario", "scenario_paths", required=True, multiple=True,
              type=click.Path(), help="World file; repeat for several.")
@click.option("--rules", "rules_path", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path())
@click.option("--seeds", type=int, default=300, show_default=True,
              help="Number of seeded episodes per scenario.")
@click.option("--base-seed", type=int, default=0, show_default=True)
@backend_options
def sweep(scenario_paths, rules_path, config_path, seeds, base_seed, **backend_flags):
    """Monte Carlo sweep of seeded episodes; prints mean and 95% CI."""
    config = resolve_backend_config(**backend_flags)
    try:
        cfg = simworld.SimConfig.from_file(config_path) if config_path else simworld.SimConfig()
        rules = simworld.EpisodeRules.from_file(rules_path)
    except simworld.SimError as e:
        _fail(EXIT_USAGE, str(e))
    try:
        backend = llmbackend.make_backend(config)
        result = simworld.run_sweep(
            list(scenario_paths), rules, backend, cfg,
            seeds=range(base_seed, base_seed + seeds), params=config.params(),
        )
    except (llmbackend.BackendError, PromptError) as e:
        _fail(EXIT_BACKEND, str(e))
    except simworld.SimError as e:
        _fail(EXIT_USAGE, str(e))
    click.echo(result.render())
    sys.exit(EXIT_OK)


@main.command(name="cache-info")
@click.option("--cache", "cache_dir", type=click.Path())
@click.option("--replay", "replay_path", type=click.Path())
def cache_info(cache_dir, replay_path):
    """Show record counts and fingerprints of a cache or replay store."""
    if bool(cache_dir) == bool(replay_path):
        _fail(EXIT_USAGE, "exactly one of --cache or --replay is required")
    path = (
        Path(cache_dir) / llmbackend.CACHE_FILE_NAME if cache_dir else Path(replay_path)
    )
    if not path.exists():
        _fail(EXIT_USAGE, f"store not found: {path}")
    try:
        index = llmbackend.load_store_index(path)
    except llmbackend.StoreError as e:
        _fail(EXIT_USAGE, str(e))
    models = {}
    with path.open(encoding="utf-8") as f:
        for line in f:
            if line.strip():
                rec = json.loads(line)
                models[rec.get("model", "?")] = models.get(rec.get("model", "?"), 0) + 1
    import hashlib

    digest = hashlib.sha256(path.read_bytes()).hexdigest()
    click.echo(f"store: {path}")
    click.echo(f"records: {len(index)} unique keys")
    for model, count in sorted(models.items()):
        click.echo(f"  model {model}: {count} record(s)")
    click.echo(f"sha256: {digest}")
    click.echo(f"bytes: {path.stat().st_size}")
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
