#!/usr/bin/env python3
"""Generate the committed runtime fixtures: benchmark dataset + replay
stores + simulator worlds.

The benchmark fixture encodes hand-chosen predictions (including deliberate
mistakes) so macro accuracies are known by construction; the expected
numbers are written beside the dataset and also frozen in the tests.

Run from the repository root:  python tools/gen_runtime_fixtures.py
"""

import json
import math
import random
from pathlib import Path

from putaway import promptkit as pk
from putaway.core import Placement, Primitive, PrimitiveChoice
from putaway.llmbackend import DecodingParams, store_record

ROOT = Path(__file__).resolve().parent.parent
BENCH = ROOT / "tests" / "fixtures" / "bench"
SECTIONS = ROOT / "tests" / "fixtures" / "sections"
SIM = ROOT / "tests" / "fixtures" / "sim"
APPENDIX = ROOT / "tests" / "fixtures" / "appendix"

MODEL_ID = "fixture-llm"
PARAMS = DecodingParams(model_id=MODEL_ID)


def selection_completion(predictions, stop_early_line=None):
    """Render a receptacle-selection completion for the given predictions.

    The first line continues the prompt's partial call; stop_early_line, when
    given, is appended as a non-call line that terminates parsing.
    """
    first_obj, first_rec = predictions[0]
    lines = [f' "{first_rec}")']
    lines += [f'pick_and_place("{o}", "{r}")' for o, r in predictions[1:]]
    if stop_early_line is not None:
        lines.append(stop_early_line)
    return "\n".join(lines)


def primitive_completion(choices):
    return "\n".join(
        f'pick_and_{"place" if p is Primitive.PLACE else "toss"}("{o}")'
        for o, p in choices
    )


# ---------------------------------------------------------------------------
# 6-scenario benchmark fixture with hand-scored completions.
# ---------------------------------------------------------------------------

BENCH_SCENARIOS = [
    {
        "id": "b01",
        "room_type": "living_room",
        "criteria": ["category"],
        "receptacles": ["shelf", "toy bin"],
        "seen": [("book", "shelf"), ("magazine", "shelf"),
                 ("toy car", "toy bin"), ("teddy bear", "toy bin")],
        "unseen": [("novel", "shelf"), ("comic book", "shelf"),
                   ("toy truck", "toy bin"), ("rubber duck", "toy bin")],
        "summary": "Put reading materials on the shelf and toys in the toy bin.",
        # predictions the fake LLM returns (None receptacle = use ground truth)
        "pred_unseen": [("novel", "shelf"), ("comic book", "shelf"),
                        ("toy truck", "toy bin"), ("rubber duck", "toy bin")],
        "pred_seen": [("book", "shelf"), ("magazine", "shelf"),
                      ("toy car", "toy bin"), ("teddy bear", "toy bin")],
    },
    {
        "id": "b02",
        "room_type": "bedroom",
        "criteria": ["category", "subcategory"],
        "receptacles": ["closet", "hamper"],
        "seen": [("clean shirt", "closet"), ("clean jeans", "closet"),
                 ("dirty socks", "hamper"), ("dirty towel", "hamper")],
        "unseen": [("clean jacket", "closet"), ("clean sweater", "closet"),
                   ("dirty shirt", "hamper"), ("dirty pants", "hamper")],
        "summary": "Put clean clothes in the closet and dirty clothes in the hamper.",
        "pred_unseen": [("clean jacket", "closet"), ("clean sweater", "closet"),
                        ("dirty shirt", "closet"), ("dirty pants", "hamper")],
        "pred_seen": [("clean shirt", "closet"), ("clean jeans", "closet"),
                      ("dirty socks", "hamper"), ("dirty towel", "hamper")],
    },
    {
        "id": "b03",
        "room_type": "kitchen",
        "criteria": ["attribute"],
        "receptacles": ["recycling bin", "trash can"],
        "seen": [("soda can", "recycling bin"), ("glass bottle", "recycling bin"),
                 ("banana peel", "trash can"), ("candy wrapper", "trash can")],
        "unseen": [("beer can", "recycling bin"), ("milk jug", "recycling bin"),
                   ("apple core", "trash can"), ("paper towel", "trash can")],
        "summary": "Put recyclable items in the recycling bin and food waste in the trash can.",
        "pred_unseen": [("beer can", "recycling bin"), ("milk jug", "trash can"),
                        ("apple core", "trash can"), ("paper towel", "recycling bin")],
        "pred_seen": [("soda can", "recycling bin"), ("glass bottle", "recycling bin"),
                      ("banana peel", "trash can"), ("candy wrapper", "recycling bin")],
    },
    {
        "id": "b04",
        "room_type": "pantry_room",
        "criteria": ["function"],
        "receptacles": ["top shelf", "bottom shelf"],
        "seen": [("flour", "top shelf"), ("sugar", "top shelf"),
                 ("olive oil", "bottom shelf"), ("vinegar", "bottom shelf")],
        "unseen": [("rice", "top shelf"), ("cornstarch", "top shelf"),
                   ("soy sauce", "bottom shelf"), ("sesame oil", "bottom shelf")],
        "summary": "Put baking ingredients on the top shelf and cooking liquids on the bottom shelf.",
        "pred_unseen": [("rice", "top shelf"), ("cornstarch", "top shelf"),
                        ("soy sauce", "bottom shelf"), ("sesame oil", "bottom shelf")],
        "pred_seen": [("flour", "top shelf"), ("sugar", "top shelf"),
                      ("olive oil", "bottom shelf"), ("vinegar", "bottom shelf")],
    },
    {
        "id": "b05",
        "room_type": "living_room",
        "criteria": ["multiple_categories"],
        "receptacles": ["shelf", "basket", "drawer"],
        "seen": [("book", "shelf"), ("toy robot", "shelf"),
                 ("blanket", "basket"), ("pillow cover", "basket"),
                 ("remote control", "drawer"), ("charging cable", "drawer")],
        "unseen": [("atlas", "shelf"), ("puzzle box", "shelf"),
                   ("throw blanket", "basket"), ("cushion cover", "basket"),
                   ("game controller", "drawer"), ("phone charger", "drawer")],
        "summary": "Put books and toys on the shelf, soft furnishings in the basket, and electronics in the drawer.",
        "pred_unseen": [("atlas", "shelf"), ("puzzle box", "drawer"),
                        ("throw blanket", "basket"), ("cushion cover", "basket"),
                        ("game controller", "drawer"), ("phone charger", "drawer")],
        "pred_seen": [("book", "shelf"), ("toy robot", "shelf"),
                      ("blanket", "basket"), ("pillow cover", "basket"),
                      ("remote control", "drawer"), ("charging cable", "drawer")],
    },
    {
        "id": "b06",
        "room_type": "kitchen",
        "criteria": ["category", "attribute"],
        "receptacles": ["cabinet", "fridge"],
        "seen": [("cereal", "cabinet"), ("crackers", "cabinet"),
                 ("milk", "fridge"), ("yogurt", "fridge")],
        "unseen": [("oatmeal", "cabinet"), ("granola", "cabinet"),
                   ("cheese", "fridge"), ("butter", "fridge")],
        "summary": "Put dry goods in the cabinet and dairy products in the fridge.",
        # completion rambles after three placements, leaving butter unpredicted
        "pred_unseen": [("oatmeal", "cabinet"), ("granola", "cabinet"),
                        ("cheese", "fridge")],
        "pred_unseen_stop": "Done.",
        "pred_seen": [("cereal", "cabinet"), ("crackers", "cabinet"),
                      ("milk", "fridge"), ("yogurt", "fridge")],
    },
]


def gen_bench():
    BENCH.mkdir(parents=True, exist_ok=True)
    dataset = {"scenarios": []}
    records = []
    expected = {"scenarios": {}, "per_criterion": {}}
    for spec in BENCH_SCENARIOS:
        dataset["scenarios"].append(
            {
                "id": spec["id"],
                "room_type": spec["room_type"],
                "receptacles": spec["receptacles"],
                "seen": [{"object": o, "receptacle": r} for o, r in spec["seen"]],
                "unseen": [{"object": o, "receptacle": r} for o, r in spec["unseen"]],
                "criteria": spec["criteria"],
            }
        )
        seen_objects = [o for o, _ in spec["seen"]]
        unseen_objects = [o for o, _ in spec["unseen"]]
        seen_placements = [Placement(o, r) for o, r in spec["seen"]]
        summ_prompt = pk.build_receptacle_summarization_prompt(
            seen_objects, spec["receptacles"], seen_placements
        )
        records.append(store_record(summ_prompt, PARAMS, " " + spec["summary"]))
        summary = pk.Summary(text=spec["summary"])
        unseen_prompt = pk.build_receptacle_selection_prompt(
            summary, unseen_objects, spec["receptacles"]
        )
        records.append(
            store_record(
                unseen_prompt, PARAMS,
                selection_completion(spec["pred_unseen"],
                                     spec.get("pred_unseen_stop")),
            )
        )
        seen_prompt = pk.build_receptacle_selection_prompt(
            summary, seen_objects, spec["receptacles"]
        )
        records.append(
            store_record(seen_prompt, PARAMS, selection_completion(spec["pred_seen"]))
        )
        truth_seen = dict(spec["seen"])
        truth_unseen = dict(spec["unseen"])
        correct_seen = sum(
            1 for o, r in spec["pred_seen"] if truth_seen[o] == r
        )
        correct_unseen = sum(
            1 for o, r in spec["pred_unseen"] if truth_unseen[o] == r
        )
        expected["scenarios"][spec["id"]] = {
            "acc_seen": correct_seen / len(spec["seen"]),
            "acc_unseen": correct_unseen / len(spec["unseen"]),
        }
    accs = expected["scenarios"]
    expected["macro_acc_seen"] = sum(v["acc_seen"] for v in accs.values()) / len(accs)
    expected["macro_acc_unseen"] = sum(v["acc_unseen"] for v in accs.values()) / len(accs)
    crit_map = {}
    for spec in BENCH_SCENARIOS:
        for crit in spec["criteria"]:
            crit_map.setdefault(crit, []).append(spec["id"])
    for crit, ids in sorted(crit_map.items()):
        expected["per_criterion"][crit] = {
            "scenarios": len(ids),
            "acc_seen": sum(accs[i]["acc_seen"] for i in ids) / len(ids),
            "acc_unseen": sum(accs[i]["acc_unseen"] for i in ids) / len(ids),
        }
    (BENCH / "fixture_dataset.json").write_text(
        json.dumps(dataset, indent=2) + "\n", encoding="utf-8"
    )
    with (BENCH / "replay.jsonl").open("w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=True, separators=(",", ":")) + "\n")
    (BENCH / "expected_scores.json").write_text(
        json.dumps(expected, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"bench: {len(dataset['scenarios'])} scenarios, {len(records)} replay records")


# ---------------------------------------------------------------------------
# Walkthrough fixture: the four-shirt scenario, its dataset file, and a
# replay store covering every prompt the pipelines issue for it (plus the
# appendix prompt/completion pairs).
# ---------------------------------------------------------------------------

S31 = {
    "id": "s31",
    "room_type": "bedroom",
    "criteria": ["attribute"],
    "receptacles": ["drawer", "closet"],
    "seen": [
        {"object": "yellow shirt", "receptacle": "drawer", "primitive": "place"},
        {"object": "dark purple shirt", "receptacle": "closet", "primitive": "place"},
        {"object": "white socks", "receptacle": "drawer", "primitive": "toss"},
        {"object": "black shirt", "receptacle": "closet", "primitive": "place"},
    ],
    "unseen": [
        {"object": "black socks", "receptacle": "closet", "primitive": "toss"},
        {"object": "white shirt", "receptacle": "drawer", "primitive": "place"},
        {"object": "navy socks", "receptacle": "closet", "primitive": "toss"},
        {"object": "beige shirt", "receptacle": "drawer", "primitive": "place"},
    ],
}

REC_SUMMARY = "Put light-colored clothes in the drawer and dark-colored clothes in the closet."
PRIM_SUMMARY = "Pick and place shirts, pick and toss socks."


def gen_sections():
    SECTIONS.mkdir(parents=True, exist_ok=True)
    (SECTIONS / "s31_dataset.json").write_text(
        json.dumps({"scenarios": [S31]}, indent=2) + "\n", encoding="utf-8"
    )
    (SECTIONS / "s31_examples.json").write_text(
        json.dumps(
            {
                "objects": [e["object"] for e in S31["seen"]],
                "receptacles": S31["receptacles"],
                "seen": S31["seen"],
            },
            indent=2,
        )
        + "\n",
        encoding="utf-8",
    )

    seen_objects = [e["object"] for e in S31["seen"]]
    unseen_objects = [e["object"] for e in S31["unseen"]]
    receptacles = S31["receptacles"]
    seen_placements = [Placement(e["object"], e["receptacle"]) for e in S31["seen"]]
    seen_choices = [
        PrimitiveChoice(e["object"], Primitive(e["primitive"])) for e in S31["seen"]
    ]
    rec_summary = pk.Summary(text=REC_SUMMARY)
    prim_summary = pk.Summary(text=PRIM_SUMMARY)

    records = []

    def add(prompt, completion):
        records.append(store_record(prompt, PARAMS, completion))

    # summarization + selection, both splits
    add(
        pk.build_receptacle_summarization_prompt(seen_objects, receptacles, seen_placements),
        (SECTIONS / "s31_summarization_completion.txt").read_text(encoding="utf-8"),
    )
    add(
        pk.build_receptacle_selection_prompt(rec_summary, unseen_objects, receptacles),
        (SECTIONS / "s31_selection_completion.txt").read_text(encoding="utf-8"),
    )
    add(
        pk.build_receptacle_selection_prompt(rec_summary, seen_objects, receptacles),
        selection_completion([(e["object"], e["receptacle"]) for e in S31["seen"]]),
    )
    # examples-only, both splits
    add(
        pk.build_examples_only_prompt(seen_objects, receptacles, seen_placements, unseen_objects),
        (SECTIONS / "s42_examples_only_completion.txt").read_text(encoding="utf-8"),
    )
    add(
        pk.build_examples_only_prompt(seen_objects, receptacles, seen_placements, seen_objects),
        selection_completion([(e["object"], e["receptacle"]) for e in S31["seen"]]),
    )
    # commonsense, both splits (seen-side placements are crafted, not printed)
    add(
        pk.build_commonsense_prompt(unseen_objects, receptacles),
        (SECTIONS / "s43_commonsense_completion.txt").read_text(encoding="utf-8"),
    )
    add(
        pk.build_commonsense_prompt(seen_objects, receptacles),
        selection_completion(
            [("yellow shirt", "closet"), ("dark purple shirt", "closet"),
             ("white socks", "drawer"), ("black shirt", "closet")]
        ),
    )
    # primitive pipeline, both splits
    add(
        pk.build_primitive_summarization_prompt(seen_objects, seen_choices),
        (SECTIONS / "s32_summarization_completion.txt").read_text(encoding="utf-8"),
    )
    add(
        pk.build_primitive_selection_prompt(prim_summary, unseen_objects),
        (SECTIONS / "s32_selection_completion.txt").read_text(encoding="utf-8"),
    )
    add(
        pk.build_primitive_selection_prompt(prim_summary, seen_objects),
        primitive_completion(
            [(e["object"], Primitive(e["primitive"])) for e in S31["seen"]]
        ),
    )
    # category extraction for the receptacle summary
    add(
        pk.build_category_extraction_prompt(rec_summary),
        (SECTIONS / "s33_extraction_completion.txt").read_text(encoding="utf-8"),
    )
    # appendix pairs, replayable as-is
    for i in range(1, 8):
        prompt_text = (APPENDIX / f"a{i}_prompt.txt").read_text(encoding="utf-8")
        completion = (APPENDIX / f"a{i}_completion.txt").read_text(encoding="utf-8")
        records.append(store_record(prompt_text, PARAMS, completion))

    with (SECTIONS / "replay.jsonl").open("w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=True, separators=(",", ":")) + "\n")
    print(f"sections: {len(records)} replay records")


# ---------------------------------------------------------------------------
# Simulator fixture worlds: 8 layouts, 10 objects each, 2 categories.
# ---------------------------------------------------------------------------

SIM_RECEPTACLES = [
    {"id": "r_toybin", "name": "toy bin", "footprint": [0.2, 0.2, 1.0, 1.0],
     "drop_point": [0.6, 0.6]},
    {"id": "r_hamper", "name": "hamper", "footprint": [3.0, 3.0, 3.8, 3.8],
     "drop_point": [3.4, 3.4]},
]

SIM_RULES = {
    "receptacle_summary": "Put toys in the toy bin and socks in the hamper.",
    "primitive_summary": "Pick and place toys, pick and toss socks.",
    "categories": ["toy", "sock"],
}


def _sample_positions(rng, count, forbidden, bounds=(0.3, 3.7), min_gap=0.25):
    positions = []
    while len(positions) < count:
        x = round(rng.uniform(*bounds), 2)
        y = round(rng.uniform(*bounds), 2)
        if any(fx0 <= x <= fx1 and fy0 <= y <= fy1 for fx0, fy0, fx1, fy1 in forbidden):
            continue
        if any(math.hypot(x - px, y - py) < min_gap for px, py in positions):
            continue
        positions.append((x, y))
    return positions


def gen_sim():
    SIM.mkdir(parents=True, exist_ok=True)
    margin = 0.45  # inflation 0.25 plus clearance
    forbidden = [
        (r["footprint"][0] - margin, r["footprint"][1] - margin,
         r["footprint"][2] + margin, r["footprint"][3] + margin)
        for r in SIM_RECEPTACLES
    ]
    for w in range(1, 9):
        rng = random.Random(1000 + w)
        positions = _sample_positions(rng, 10, forbidden)
        objects = []
        for i, (x, y) in enumerate(positions):
            category = "toy" if i < 5 else "sock"
            idx = i + 1 if i < 5 else i - 4
            objects.append(
                {
                    "id": f"o{i + 1:02d}",
                    "name": f"{category} {idx}",
                    "category": category,
                    "position": [x, y],
                }
            )
        world = {
            "bounds": [0.0, 0.0, 4.0, 4.0],
            "resolution": 0.1,
            "robot_start": [2.0, 2.0, 0.0],
            "objects": objects,
            "receptacles": SIM_RECEPTACLES,
        }
        (SIM / f"world_{w}.json").write_text(
            json.dumps(world, indent=2) + "\n", encoding="utf-8"
        )
    (SIM / "rules.json").write_text(
        json.dumps(SIM_RULES, indent=2) + "\n", encoding="utf-8"
    )
    configs = {
        "config_perfect.json": {
            "p_localize": 1.0, "p_classify": 1.0, "p_place": 1.0, "p_toss": 1.0,
            "lookahead": 0.25, "speed": 1.0, "dt": 0.08, "inflation": 0.25,
            "max_steps": 60, "rng_seed": 0,
        },
        "config_paper_rates.json": {
            "p_localize": 0.925, "p_classify": 0.955, "p_place": 0.962,
            "p_toss": 0.962, "lookahead": 0.25, "speed": 1.0, "dt": 0.08,
            "inflation": 0.25, "max_steps": 120, "rng_seed": 0,
        },
    }
    for name, cfg in configs.items():
        (SIM / name).write_text(json.dumps(cfg, indent=2) + "\n", encoding="utf-8")

    rec_summary = pk.Summary(text=SIM_RULES["receptacle_summary"])
    prim_summary = pk.Summary(text=SIM_RULES["primitive_summary"])
    categories = SIM_RULES["categories"]
    receptacle_names = [r["name"] for r in SIM_RECEPTACLES]
    records = [
        store_record(
            pk.build_realworld_receptacle_selection_prompt(
                rec_summary, categories, receptacle_names
            ),
            PARAMS,
            selection_completion([("toy", "toy bin"), ("sock", "hamper")]),
        ),
        store_record(
            pk.build_realworld_primitive_selection_prompt(prim_summary, categories),
            PARAMS,
            primitive_completion([("toy", Primitive.PLACE), ("sock", Primitive.TOSS)]),
        ),
    ]
    with (SIM / "replay.jsonl").open("w", encoding="utf-8") as f:
        for rec in records:
            f.write(json.dumps(rec, ensure_ascii=True, separators=(",", ":")) + "\n")
    print(f"sim: 8 worlds, {len(records)} replay records")


if __name__ == "__main__":
    gen_bench()
    gen_sections()
    gen_sim()
