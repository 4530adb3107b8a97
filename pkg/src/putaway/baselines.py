"""Non-summarization prediction methods.

Two nearest-neighbor baselines (taxonomy shortest-path and embedding cosine
similarity) plus the two LLM baselines that skip the summarization step
(examples-only and commonsense). Nearest-neighbor ties break by seen-list
order, which the dataset fixes, so predictions are deterministic.
"""

import math
from collections import deque
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from putaway.core import Scenario
from putaway.llmbackend import DecodingParams
from putaway.promptkit import (
    PlacementParse,
    build_commonsense_prompt,
    build_examples_only_prompt,
    parse_placements,
)


class BaselineError(Exception):
    pass


class Unreachable(BaselineError):
    """No path between the two concepts in the taxonomy."""


class UnmappedName(BaselineError):
    """An object name has no concept mapping."""


class ZeroVector(BaselineError):
    pass


class DimensionMismatch(BaselineError):
    pass


class MissingEmbedding(BaselineError):
    pass


@dataclass
class TaxonomyGraph:
    """Undirected hypernym/hyponym graph with a surface-name index."""

    adjacency: dict[str, set[str]] = field(default_factory=dict)
    name_index: dict[str, str] = field(default_factory=dict)

    @property
    def nodes(self):
        return self.adjacency.keys()

    def add_edge(self, a: str, b: str) -> None:
        if a == b:
            raise BaselineError(f"self-loop on concept {a!r}")
        self.adjacency.setdefault(a, set()).add(b)
        self.adjacency.setdefault(b, set()).add(a)

    @staticmethod
    def load(edges_path, synonyms_path=None) -> "TaxonomyGraph":
        """Edge list `a<TAB>b` plus optional synonym file `surface<TAB>concept`."""
        g = TaxonomyGraph()
        for lineno, line in enumerate(
            Path(edges_path).read_text(encoding="utf-8").splitlines(), start=1
        ):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise BaselineError(f"{edges_path}:{lineno}: expected 'a<TAB>b'")
            g.add_edge(parts[0], parts[1])
        if synonyms_path is not None:
            for lineno, line in enumerate(
                Path(synonyms_path).read_text(encoding="utf-8").splitlines(), start=1
            ):
                line = line.strip()
                if not line or line.startswith("#"):
                    continue
                parts = line.split("\t")
                if len(parts) != 2:
                    raise BaselineError(
                        f"{synonyms_path}:{lineno}: expected 'surface<TAB>concept'"
                    )
                surface, concept = parts
                if concept not in g.adjacency:
                    raise BaselineError(
                        f"{synonyms_path}:{lineno}: unknown concept {concept!r}"
                    )
                g.name_index[surface] = concept
        return g


@dataclass
class NameMapping:
    """Benchmark object name -> taxonomy concept id."""

    entries: dict[str, str]

    @staticmethod
    def load(path, graph: TaxonomyGraph) -> "NameMapping":
        entries = {}
        for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1
        ):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise BaselineError(f"{path}:{lineno}: expected 'name<TAB>concept'")
            name, concept = parts
            if concept not in graph.adjacency:
                raise BaselineError(f"{path}:{lineno}: unknown concept {concept!r}")
            entries[name] = concept
        return NameMapping(entries)

    def resolve(self, name: str) -> str:
        try:
            return self.entries[name]
        except KeyError:
            raise UnmappedName(f"object {name!r} has no concept mapping") from None


def taxonomy_distance(g: TaxonomyGraph, a: str, b: str) -> int:
    """Shortest undirected path length in edges; bidirectional BFS."""
    for node in (a, b):
        if node not in g.adjacency:
            raise BaselineError(f"concept {node!r} not in taxonomy")
    if a == b:
        return 0
    front_a = {a}
    front_b = {b}
    seen_a = {a: 0}
    seen_b = {b: 0}
    dist = 0
    while front_a and front_b:
        # expand the smaller frontier
        if len(front_a) > len(front_b):
            front_a, front_b = front_b, front_a
            seen_a, seen_b = seen_b, seen_a
        dist += 1
        next_front = set()
        for node in front_a:
            for nb in g.adjacency[node]:
                if nb in seen_b:
                    return seen_a[node] + 1 + seen_b[nb]
                if nb not in seen_a:
                    seen_a[nb] = seen_a[node] + 1
                    next_front.add(nb)
        front_a = next_front
    raise Unreachable(f"no path between {a!r} and {b!r}")


def _distances_from(g: TaxonomyGraph, source: str) -> dict[str, int]:
    dist = {source: 0}
    queue = deque([source])
    while queue:
        node = queue.popleft()
        for nb in g.adjacency[node]:
            if nb not in dist:
                dist[nb] = dist[node] + 1
                queue.append(nb)
    return dist


def taxonomy_nearest_seen(
    scenario: Scenario, g: TaxonomyGraph, m: NameMapping, target: str
):
    """The seen placement whose object is taxonomy-nearest to target."""
    target_concept = m.resolve(target)
    seen_concepts = [(p, m.resolve(p.object)) for p in scenario.seen]
    if target_concept not in g.adjacency:
        raise BaselineError(f"concept {target_concept!r} not in taxonomy")
    dist = _distances_from(g, target_concept)
    best = None
    best_d = math.inf
    for p, concept in seen_concepts:
        if concept not in g.adjacency:
            raise BaselineError(f"concept {concept!r} not in taxonomy")
        d = dist.get(concept, math.inf)
        if d < best_d:
            best, best_d = p, d
    if best is None or math.isinf(best_d):
        raise Unreachable(
            f"no seen object reachable from {target!r} in the taxonomy"
        )
    return best


def taxonomy_predict(
    scenario: Scenario, g: TaxonomyGraph, m: NameMapping, target: str
) -> str:
    """Receptacle of the taxonomy-nearest seen object; ties by seen order."""
    return taxonomy_nearest_seen(scenario, g, m, target).receptacle


@dataclass
class EmbeddingTable:
    dim: int
    vectors: dict[str, np.ndarray]

    @staticmethod
    def load(path) -> "EmbeddingTable":
        """`name<TAB>v1 v2 ...` rows; all vectors must share one length."""
        vectors = {}
        dim = None
        for lineno, line in enumerate(
            Path(path).read_text(encoding="utf-8").splitlines(), start=1
        ):
            line = line.rstrip()
            if not line or line.startswith("#"):
                continue
            parts = line.split("\t")
            if len(parts) != 2:
                raise BaselineError(f"{path}:{lineno}: expected 'name<TAB>components'")
            name, comps = parts
            try:
                vec = np.array([float(x) for x in comps.split()], dtype=np.float64)
            except ValueError as e:
                raise BaselineError(f"{path}:{lineno}: {e}") from e
            if not np.all(np.isfinite(vec)):
                raise BaselineError(f"{path}:{lineno}: non-finite component")
            if dim is None:
                dim = vec.size
            elif vec.size != dim:
                raise BaselineError(
                    f"{path}:{lineno}: dimension {vec.size} != {dim}"
                )
            vectors[name] = vec
        if dim is None:
            raise BaselineError(f"{path}: empty embedding table")
        return EmbeddingTable(dim=int(dim), vectors=vectors)

    def lookup(self, name: str) -> np.ndarray:
        try:
            return self.vectors[name]
        except KeyError:
            raise MissingEmbedding(f"no embedding for {name!r}") from None


def cosine_similarity(u, v) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape or u.ndim != 1 or u.size == 0:
        raise DimensionMismatch(f"shapes {u.shape} and {v.shape}")
    nu = float(np.linalg.norm(u))
    nv = float(np.linalg.norm(v))
    if nu == 0.0 or nv == 0.0:
        raise ZeroVector("cosine similarity undefined for the zero vector")
    sim = float(np.dot(u, v)) / (nu * nv)
    return max(-1.0, min(1.0, sim))


def embedding_nearest_seen(scenario: Scenario, table: EmbeddingTable, target: str):
    """The seen placement whose object is most cosine-similar to target."""
    tv = table.lookup(target)
    best = None
    best_sim = -math.inf
    for p in scenario.seen:
        sim = cosine_similarity(tv, table.lookup(p.object))
        if sim > best_sim:
            best, best_sim = p, sim
    return best


def embedding_predict(scenario: Scenario, table: EmbeddingTable, target: str) -> str:
    """Receptacle of the most cosine-similar seen object; ties by seen order."""
    return embedding_nearest_seen(scenario, table, target).receptacle


def examples_only_predict(
    scenario: Scenario, backend, params: DecodingParams,
    query_objects=None,
) -> PlacementParse:
    """Directly infer placements from the seen examples, no summary step.

    query_objects defaults to the unseen split; passing the seen objects
    re-queries the examples themselves (memorization check).
    """
    targets = tuple(query_objects) if query_objects is not None else scenario.unseen_objects
    prompt = build_examples_only_prompt(
        scenario.seen_objects, scenario.receptacles, scenario.seen, targets
    )
    record = backend.complete(prompt, params)
    return parse_placements(targets[0], record.completion)


def commonsense_predict(
    scenario: Scenario, backend, params: DecodingParams,
    query_objects=None,
) -> PlacementParse:
    """Placement from object/receptacle lists alone, preferences unused."""
    targets = tuple(query_objects) if query_objects is not None else scenario.unseen_objects
    prompt = build_commonsense_prompt(targets, scenario.receptacles)
    record = backend.complete(prompt, params)
    return parse_placements(targets[0], record.completion)
