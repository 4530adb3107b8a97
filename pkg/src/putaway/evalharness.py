"""Benchmark runner: evaluate a method over a dataset and score accuracy.

Accuracy is macro-averaged: per-scenario accuracy first, then an unweighted
mean across scenarios. Seen and unseen splits are scored separately (the
seen split measures memorization). Per-scenario method failures degrade to
zero-accuracy results with an anomaly flag so one bad completion cannot
abort a whole run; configuration problems fail fast before the run starts.
"""

import csv
import io
import json
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum
from pathlib import Path

from putaway import baselines, llmbackend
from putaway.core import Dataset, Placement, Primitive, PrimitiveChoice, Scenario, SortingCriterion
from putaway.llmbackend import BackendConfig, DecodingParams
from putaway.promptkit import (
    PromptError,
    Summary,
    build_primitive_selection_prompt,
    build_primitive_summarization_prompt,
    build_receptacle_selection_prompt,
    build_receptacle_summarization_prompt,
    parse_placements,
    parse_primitive_choices,
    parse_summary,
)


class HarnessError(Exception):
    pass


class ConfigError(HarnessError):
    pass


class MissingAnnotations(HarnessError):
    """Primitive benchmark requires primitive-annotated scenarios."""


class MethodKind(Enum):
    SUMMARIZATION = "summarization"
    EXAMPLES_ONLY = "examples-only"
    COMMONSENSE = "commonsense"
    TAXONOMY = "taxonomy"
    EMBEDDING = "embedding"
    HUMAN_SUMMARY = "human-summary"


LLM_KINDS = frozenset(
    {MethodKind.SUMMARIZATION, MethodKind.EXAMPLES_ONLY, MethodKind.COMMONSENSE,
     MethodKind.HUMAN_SUMMARY}
)


@dataclass(frozen=True)
class MethodSpec:
    kind: MethodKind
    backend: BackendConfig | None = None
    taxonomy_edges: str | None = None
    taxonomy_synonyms: str | None = None
    taxonomy_mapping: str | None = None
    embedding_table: str | None = None
    human_summaries: str | None = None

    def __post_init__(self):
        if self.kind in LLM_KINDS and self.backend is None:
            raise ConfigError(f"method {self.kind.value} requires a backend")
        if self.kind is MethodKind.TAXONOMY and not (
            self.taxonomy_edges and self.taxonomy_mapping
        ):
            raise ConfigError("taxonomy method requires edge-list and mapping files")
        if self.kind is MethodKind.EMBEDDING and not self.embedding_table:
            raise ConfigError("embedding method requires an embedding table file")
        if self.kind is MethodKind.HUMAN_SUMMARY and not self.human_summaries:
            raise ConfigError("human-summary method requires a summary file")


def normalize(text: str) -> str:
    """Match-time normalization: trim, collapse whitespace, case-fold."""
    return " ".join(text.split()).casefold()


@dataclass(frozen=True)
class ScenarioResult:
    scenario_id: str
    predictions_seen: tuple
    predictions_unseen: tuple
    correct_seen: int
    correct_unseen: int
    incorrect_seen: int
    incorrect_unseen: int
    unpredicted_seen: int
    unpredicted_unseen: int
    acc_seen: float
    acc_unseen: float
    anomalies: tuple[str, ...]
    summary_text: str | None = None


def _score_receptacle_split(scenario: Scenario, split, predictions):
    """(correct, incorrect, unpredicted, anomalies) for one split."""
    truth = {normalize(p.object): normalize(p.receptacle) for p in split}
    valid_receptacles = {normalize(r) for r in scenario.receptacles}
    anomalies = []
    chosen: dict[str, str] = {}
    for pred in predictions:
        obj = normalize(pred.object)
        if obj not in truth:
            anomalies.append(f"extraneous_object:{pred.object}")
            continue
        if obj in chosen:
            anomalies.append(f"duplicate_prediction:{pred.object}")
            continue
        rec = normalize(pred.receptacle)
        if rec not in valid_receptacles:
            anomalies.append(f"unknown_receptacle:{pred.receptacle}")
        chosen[obj] = rec
    correct = sum(1 for obj, rec in chosen.items() if truth[obj] == rec)
    incorrect = len(chosen) - correct
    unpredicted = len(truth) - len(chosen)
    return correct, incorrect, unpredicted, anomalies


def _score_primitive_split(split_choices, predictions):
    truth = {normalize(c.object): c.primitive for c in split_choices}
    anomalies = []
    chosen: dict[str, Primitive] = {}
    for pred in predictions:
        obj = normalize(pred.object)
        if obj not in truth:
            anomalies.append(f"extraneous_object:{pred.object}")
            continue
        if obj in chosen:
            anomalies.append(f"duplicate_prediction:{pred.object}")
            continue
        chosen[obj] = pred.primitive
    correct = sum(1 for obj, prim in chosen.items() if truth[obj] is prim)
    incorrect = len(chosen) - correct
    unpredicted = len(truth) - len(chosen)
    return correct, incorrect, unpredicted, anomalies


def score_scenario(
    scenario: Scenario,
    predictions_seen,
    predictions_unseen,
    extra_anomalies=(),
    summary_text: str | None = None,
    primitive: bool = False,
) -> ScenarioResult:
    """Score both splits; counts satisfy correct+incorrect+unpredicted=total."""
    if primitive:
        c_s, i_s, u_s, a_s = _score_primitive_split(
            scenario.seen_primitives, predictions_seen
        )
        c_u, i_u, u_u, a_u = _score_primitive_split(
            scenario.unseen_primitives, predictions_unseen
        )
    else:
        c_s, i_s, u_s, a_s = _score_receptacle_split(
            scenario, scenario.seen, predictions_seen
        )
        c_u, i_u, u_u, a_u = _score_receptacle_split(
            scenario, scenario.unseen, predictions_unseen
        )
    n_seen = len(scenario.seen)
    n_unseen = len(scenario.unseen)
    return ScenarioResult(
        scenario_id=scenario.id,
        predictions_seen=tuple(predictions_seen),
        predictions_unseen=tuple(predictions_unseen),
        correct_seen=c_s,
        correct_unseen=c_u,
        incorrect_seen=i_s,
        incorrect_unseen=i_u,
        unpredicted_seen=u_s,
        unpredicted_unseen=u_u,
        acc_seen=c_s / n_seen if n_seen else 0.0,
        acc_unseen=c_u / n_unseen if n_unseen else 0.0,
        anomalies=tuple(extra_anomalies) + tuple(a_s) + tuple(a_u),
        summary_text=summary_text,
    )


def run_summarization_method(scenario: Scenario, backend, params: DecodingParams,
                             summary: Summary | None = None):
    """Summarize the seen examples, then select receptacles for both splits.

    A pre-supplied summary (human-summary method) skips the first step.
    Returns (summary, seen PlacementParse, unseen PlacementParse).
    """
    if summary is None:
        prompt = build_receptacle_summarization_prompt(
            scenario.seen_objects, scenario.receptacles, scenario.seen
        )
        record = backend.complete(prompt, params)
        summary = parse_summary(record.completion)

    def select(objects):
        prompt = build_receptacle_selection_prompt(
            summary, objects, scenario.receptacles
        )
        record = backend.complete(prompt, params)
        return parse_placements(objects[0], record.completion)

    unseen_parse = select(scenario.unseen_objects)
    seen_parse = select(scenario.seen_objects)
    return summary, seen_parse, unseen_parse


def run_primitive_summarization_method(scenario: Scenario, backend,
                                       params: DecodingParams):
    prompt = build_primitive_summarization_prompt(
        scenario.seen_objects, scenario.seen_primitives
    )
    record = backend.complete(prompt, params)
    summary = parse_summary(record.completion)

    def select(objects):
        prompt = build_primitive_selection_prompt(summary, objects)
        record = backend.complete(prompt, params)
        return parse_primitive_choices(record.completion)

    unseen_parse = select(scenario.unseen_objects)
    seen_parse = select(scenario.seen_objects)
    return summary, seen_parse, unseen_parse


def load_human_summaries(path) -> dict[str, Summary]:
    """`scenario_id<TAB>summary text` lines."""
    summaries = {}
    for lineno, line in enumerate(
        Path(path).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t", 1)
        if len(parts) != 2 or not parts[1].strip():
            raise ConfigError(f"{path}:{lineno}: expected 'scenario_id<TAB>summary'")
        summaries[parts[0]] = Summary(text=parts[1].strip())
    return summaries


@dataclass
class _Resources:
    backend: object | None = None
    params: DecodingParams | None = None
    taxonomy: baselines.TaxonomyGraph | None = None
    mapping: baselines.NameMapping | None = None
    table: baselines.EmbeddingTable | None = None
    human_summaries: dict | None = None


def _prepare(method: MethodSpec) -> _Resources:
    res = _Resources()
    if method.kind in LLM_KINDS:
        res.backend = llmbackend.make_backend(method.backend)
        res.params = method.backend.params()
    if method.kind is MethodKind.TAXONOMY:
        res.taxonomy = baselines.TaxonomyGraph.load(
            method.taxonomy_edges, method.taxonomy_synonyms
        )
        res.mapping = baselines.NameMapping.load(method.taxonomy_mapping, res.taxonomy)
    if method.kind is MethodKind.EMBEDDING:
        res.table = baselines.EmbeddingTable.load(method.embedding_table)
    if method.kind is MethodKind.HUMAN_SUMMARY:
        res.human_summaries = load_human_summaries(method.human_summaries)
    return res


_METHOD_ERRORS = (PromptError, llmbackend.BackendError, baselines.BaselineError)


def _evaluate_receptacles(scenario: Scenario, method: MethodSpec,
                          res: _Resources) -> ScenarioResult:
    warnings: list[str] = []
    summary_text = None
    try:
        if method.kind in (MethodKind.SUMMARIZATION, MethodKind.HUMAN_SUMMARY):
            preset = None
            if method.kind is MethodKind.HUMAN_SUMMARY:
                try:
                    preset = res.human_summaries[scenario.id]
                except KeyError:
                    raise ConfigError(
                        f"no human summary for scenario {scenario.id!r}"
                    ) from None
            summary, seen_parse, unseen_parse = run_summarization_method(
                scenario, res.backend, res.params, summary=preset
            )
            summary_text = summary.text
            warnings.extend(seen_parse.warnings + unseen_parse.warnings)
            preds_seen, preds_unseen = seen_parse.placements, unseen_parse.placements
        elif method.kind is MethodKind.EXAMPLES_ONLY:
            unseen_parse = baselines.examples_only_predict(
                scenario, res.backend, res.params
            )
            seen_parse = baselines.examples_only_predict(
                scenario, res.backend, res.params, query_objects=scenario.seen_objects
            )
            warnings.extend(seen_parse.warnings + unseen_parse.warnings)
            preds_seen, preds_unseen = seen_parse.placements, unseen_parse.placements
        elif method.kind is MethodKind.COMMONSENSE:
            unseen_parse = baselines.commonsense_predict(
                scenario, res.backend, res.params
            )
            seen_parse = baselines.commonsense_predict(
                scenario, res.backend, res.params, query_objects=scenario.seen_objects
            )
            warnings.extend(seen_parse.warnings + unseen_parse.warnings)
            preds_seen, preds_unseen = seen_parse.placements, unseen_parse.placements
        elif method.kind is MethodKind.TAXONOMY:
            preds_seen = tuple(
                Placement(o, baselines.taxonomy_predict(scenario, res.taxonomy, res.mapping, o))
                for o in scenario.seen_objects
            )
            preds_unseen = tuple(
                Placement(o, baselines.taxonomy_predict(scenario, res.taxonomy, res.mapping, o))
                for o in scenario.unseen_objects
            )
        elif method.kind is MethodKind.EMBEDDING:
            preds_seen = tuple(
                Placement(o, baselines.embedding_predict(scenario, res.table, o))
                for o in scenario.seen_objects
            )
            preds_unseen = tuple(
                Placement(o, baselines.embedding_predict(scenario, res.table, o))
                for o in scenario.unseen_objects
            )
        else:
            raise ConfigError(f"unsupported method {method.kind}")
    except _METHOD_ERRORS as e:
        return score_scenario(
            scenario, (), (), extra_anomalies=(f"method_error:{e}",)
        )
    anomaly_prefix = tuple(f"unparsed_output:{w}" for w in warnings)
    return score_scenario(
        scenario, preds_seen, preds_unseen,
        extra_anomalies=anomaly_prefix, summary_text=summary_text,
    )


def _evaluate_primitives(scenario: Scenario, method: MethodSpec,
                         res: _Resources) -> ScenarioResult:
    warnings: list[str] = []
    summary_text = None

    def nearest_primitive(target, nearest_fn):
        nearest = nearest_fn(target)
        by_obj = {c.object: c.primitive for c in scenario.seen_primitives}
        return PrimitiveChoice(target, by_obj[nearest.object])

    try:
        if method.kind is MethodKind.SUMMARIZATION:
            summary, seen_parse, unseen_parse = run_primitive_summarization_method(
                scenario, res.backend, res.params
            )
            summary_text = summary.text
            warnings.extend(seen_parse.warnings + unseen_parse.warnings)
            preds_seen, preds_unseen = seen_parse.choices, unseen_parse.choices
        elif method.kind is MethodKind.TAXONOMY:
            fn = lambda o: baselines.taxonomy_nearest_seen(
                scenario, res.taxonomy, res.mapping, o
            )
            preds_seen = tuple(nearest_primitive(o, fn) for o in scenario.seen_objects)
            preds_unseen = tuple(nearest_primitive(o, fn) for o in scenario.unseen_objects)
        elif method.kind is MethodKind.EMBEDDING:
            fn = lambda o: baselines.embedding_nearest_seen(scenario, res.table, o)
            preds_seen = tuple(nearest_primitive(o, fn) for o in scenario.seen_objects)
            preds_unseen = tuple(nearest_primitive(o, fn) for o in scenario.unseen_objects)
        else:
            raise ConfigError(
                f"method {method.kind.value} does not support primitive selection"
            )
    except _METHOD_ERRORS as e:
        return score_scenario(
            scenario, (), (), extra_anomalies=(f"method_error:{e}",), primitive=True
        )
    anomaly_prefix = tuple(f"unparsed_output:{w}" for w in warnings)
    return score_scenario(
        scenario, preds_seen, preds_unseen,
        extra_anomalies=anomaly_prefix, summary_text=summary_text, primitive=True,
    )


@dataclass(frozen=True)
class BenchmarkReport:
    method: str
    model_id: str | None
    replay_sha256: str | None
    task: str  # "receptacles" or "primitives"
    scenario_count: int
    macro_acc_seen: float
    macro_acc_unseen: float
    per_criterion: dict
    results: tuple[ScenarioResult, ...]

    def to_json_obj(self) -> dict:
        return {
            "method": self.method,
            "model_id": self.model_id,
            "replay_sha256": self.replay_sha256,
            "task": self.task,
            "scenario_count": self.scenario_count,
            "macro_acc_seen": self.macro_acc_seen,
            "macro_acc_unseen": self.macro_acc_unseen,
            "per_criterion": self.per_criterion,
            "results": [
                {
                    "scenario_id": r.scenario_id,
                    "correct_seen": r.correct_seen,
                    "correct_unseen": r.correct_unseen,
                    "incorrect_seen": r.incorrect_seen,
                    "incorrect_unseen": r.incorrect_unseen,
                    "unpredicted_seen": r.unpredicted_seen,
                    "unpredicted_unseen": r.unpredicted_unseen,
                    "acc_seen": r.acc_seen,
                    "acc_unseen": r.acc_unseen,
                    "anomalies": list(r.anomalies),
                    "summary": r.summary_text,
                    "predictions_seen": [_pred_obj(p) for p in r.predictions_seen],
                    "predictions_unseen": [_pred_obj(p) for p in r.predictions_unseen],
                }
                for r in self.results
            ],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), indent=2, sort_keys=True,
                          ensure_ascii=False) + "\n"

    def to_csv(self) -> str:
        """One row per scenario per split."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(
            ["scenario_id", "split", "correct", "incorrect", "unpredicted", "total",
             "accuracy"]
        )
        for r in self.results:
            total_seen = r.correct_seen + r.incorrect_seen + r.unpredicted_seen
            total_unseen = r.correct_unseen + r.incorrect_unseen + r.unpredicted_unseen
            writer.writerow(
                [r.scenario_id, "seen", r.correct_seen, r.incorrect_seen,
                 r.unpredicted_seen, total_seen, repr(r.acc_seen)]
            )
            writer.writerow(
                [r.scenario_id, "unseen", r.correct_unseen, r.incorrect_unseen,
                 r.unpredicted_unseen, total_unseen, repr(r.acc_unseen)]
            )
        return buf.getvalue()

    def render_summary(self) -> str:
        lines = [
            f"method: {self.method}   task: {self.task}   scenarios: {self.scenario_count}",
            f"macro accuracy  seen: {self.macro_acc_seen:.4f}   unseen: {self.macro_acc_unseen:.4f}",
            "per-criterion breakdown:",
        ]
        for crit in sorted(self.per_criterion):
            row = self.per_criterion[crit]
            lines.append(
                f"  {crit:<20} scenarios={row['scenarios']:<3} "
                f"seen={row['acc_seen']:.4f} unseen={row['acc_unseen']:.4f}"
            )
        return "\n".join(lines)


def _pred_obj(p) -> dict:
    if isinstance(p, Placement):
        return {"object": p.object, "receptacle": p.receptacle}
    return {"object": p.object, "primitive": p.primitive.value}


def _aggregate(ds: Dataset, method: MethodSpec, results, task: str) -> BenchmarkReport:
    results = tuple(sorted(results, key=lambda r: r.scenario_id))
    n = len(results)
    macro_seen = sum(r.acc_seen for r in results) / n if n else 0.0
    macro_unseen = sum(r.acc_unseen for r in results) / n if n else 0.0
    by_id = {r.scenario_id: r for r in results}
    per_criterion = {}
    for crit in SortingCriterion:
        tagged = [s for s in ds.scenarios if crit in s.criteria]
        if not tagged:
            continue
        rs = [by_id[s.id] for s in tagged]
        per_criterion[crit.value] = {
            "scenarios": len(rs),
            "acc_seen": sum(r.acc_seen for r in rs) / len(rs),
            "acc_unseen": sum(r.acc_unseen for r in rs) / len(rs),
        }
    model_id = method.backend.model_id if method.backend else None
    replay_sha = (
        llmbackend.replay_fingerprint(method.backend) if method.backend else None
    )
    return BenchmarkReport(
        method=method.kind.value,
        model_id=model_id,
        replay_sha256=replay_sha,
        task=task,
        scenario_count=n,
        macro_acc_seen=macro_seen,
        macro_acc_unseen=macro_unseen,
        per_criterion=per_criterion,
        results=results,
    )


def _run(ds: Dataset, method: MethodSpec, workers: int, evaluate) -> BenchmarkReport:
    if workers < 1:
        raise ConfigError("workers must be positive")
    res = _prepare(method)  # fail fast on config problems
    if workers == 1:
        results = [evaluate(s, method, res) for s in ds.scenarios]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(
                pool.map(lambda s: evaluate(s, method, res), ds.scenarios)
            )
    task = "primitives" if evaluate is _evaluate_primitives else "receptacles"
    return _aggregate(ds, method, results, task)


def run_benchmark(ds: Dataset, method: MethodSpec, workers: int = 1) -> BenchmarkReport:
    """Receptacle-selection benchmark over every scenario."""
    return _run(ds, method, workers, _evaluate_receptacles)


def run_primitive_benchmark(ds: Dataset, method: MethodSpec,
                            workers: int = 1) -> BenchmarkReport:
    """Primitive-selection benchmark; scenarios must carry annotations."""
    missing = [s.id for s in ds.scenarios if not s.has_primitives()]
    if missing:
        raise MissingAnnotations(
            f"scenarios without primitive annotations: {missing}"
        )
    return _run(ds, method, workers, _evaluate_primitives)
