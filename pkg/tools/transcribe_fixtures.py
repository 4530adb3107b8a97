#!/usr/bin/env python3
"""Write the prompt fixture corpus from hand-transcribed literals.

This is the single source of truth for the fixed in-context example blocks
(shipped as package data) and the golden prompt/completion fixtures used by
the test suite. Prompts end exactly at their completion point; none of the
files get a trailing newline appended.

Run from the repository root:  python tools/transcribe_fixtures.py
"""

from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "src" / "putaway" / "promptkit" / "data"
APPENDIX = ROOT / "tests" / "fixtures" / "appendix"
SECTIONS = ROOT / "tests" / "fixtures" / "sections"

# ---------------------------------------------------------------------------
# Fixed in-context example blocks (shared across every scenario).
# ---------------------------------------------------------------------------

IC_RECEPTACLE_SUMMARIZATION = '''objects = ["dried figs", "protein bar", "cornmeal", "Macadamia nuts", "vinegar", "herbal tea", "peanut oil", "chocolate bar", "bread crumbs", "Folgers instant coffee"]
receptacles = ["top rack", "middle rack", "table", "shelf", "plastic box"]
pick_and_place("dried figs", "plastic box")
pick_and_place("protein bar", "shelf")
pick_and_place("cornmeal", "top rack")
pick_and_place("Macadamia nuts", "plastic box")
pick_and_place("vinegar", "middle rack")
pick_and_place("herbal tea", "table")
pick_and_place("peanut oil", "middle rack")
pick_and_place("chocolate bar", "shelf")
pick_and_place("bread crumbs", "top rack")
pick_and_place("Folgers instant coffee", "table")
# Summary: Put dry ingredients on the top rack, liquid ingredients in the middle rack, tea and coffee on the table, packaged snacks on the shelf, and dried fruits and nuts in the plastic box.

objects = ["yoga pants", "wool sweater", "black jeans", "Nike shorts"]
receptacles = ["hamper", "bed"]
pick_and_place("yoga pants", "hamper")
pick_and_place("wool sweater", "bed")
pick_and_place("black jeans", "bed")
pick_and_place("Nike shorts", "hamper")
# Summary: Put athletic clothes in the hamper and other clothes on the bed.

objects = ["Nike sweatpants", "sweater", "cargo shorts", "iPhone", "dictionary", "tablet", "Under Armour t-shirt", "physics homework"]
receptacles = ["backpack", "closet", "desk", "nightstand"]
pick_and_place("Nike sweatpants", "backpack")
pick_and_place("sweater", "closet")
pick_and_place("cargo shorts", "closet")
pick_and_place("iPhone", "nightstand")
pick_and_place("dictionary", "desk")
pick_and_place("tablet", "nightstand")
pick_and_place("Under Armour t-shirt", "backpack")
pick_and_place("physics homework", "desk")
# Summary: Put workout clothes in the backpack, other clothes in the closet, books and homeworks on the desk, and electronics on the nightstand.'''

IC_RECEPTACLE_SELECTION = '''# Summary: Put clothes in the laundry basket and toys in the storage box.
objects = ["socks", "toy car", "shirt", "Lego brick"]
receptacles = ["laundry basket", "storage box"]
pick_and_place("socks", "laundry basket")
pick_and_place("toy car", "storage box")
pick_and_place("shirt", "laundry basket")
pick_and_place("Lego brick", "storage box")'''

IC_PRIMITIVE_SUMMARIZATION = '''objects = ["granola bar", "hat", "toy car", "Lego brick", "fruit snacks", "shirt"]
pick_and_toss("granola bar")
pick_and_place("hat")
pick_and_place("toy car")
pick_and_place("Lego brick")
pick_and_toss("fruit snacks")
pick_and_place("shirt")
# Summary: Pick and place clothes and toys, pick and toss snacks.'''

IC_PRIMITIVE_SELECTION = '''# Summary: Pick and place clothes, pick and toss snacks.
objects = ["granola bar", "hat", "toy car", "Lego brick", "fruit snacks", "shirt"]
pick_and_toss("granola bar")
pick_and_place("hat")
pick_and_place("toy car")
pick_and_place("Lego brick")
pick_and_toss("fruit snacks")
pick_and_place("shirt")

# Summary: Pick and place granola bars, hats, toy cars, and Lego bricks, pick and toss fruit snacks and shirts.
objects = ["clothing", "snack"]
pick_and_place("clothing")
pick_and_toss("snack")'''

IC_CATEGORY_EXTRACTION = '''# Summary: Put shirts on the bed, jackets and pants on the chair, and bags on the shelf.
objects = ["shirt", "jacket or pants", "bag"]

# Summary: Put pillows on the sofa, clothes on the chair, and shoes on the rack.
objects = ["pillow", "clothing", "shoe"]'''

# ---------------------------------------------------------------------------
# Appendix test blocks and their completions.
# ---------------------------------------------------------------------------

A1_TEST = '''objects = ["jacket", "candy bar", "soda can", "Pepsi can", "jeans", "wooden block", "orange", "chips", "wooden block 2", "apple"]
receptacles = ["recycling bin", "plastic storage box", "black storage box", "sofa", "drawer"]
pick_and_place("jacket", "sofa")
pick_and_place("candy bar", "plastic storage box")
pick_and_place("soda can", "recycling bin")
pick_and_place("Pepsi can", "recycling bin")
pick_and_place("jeans", "sofa")
pick_and_place("wooden block", "drawer")
pick_and_place("orange", "black storage box")
pick_and_place("chips", "plastic storage box")
pick_and_place("wooden block 2", "drawer")
pick_and_place("apple", "black storage box")
# Summary:'''

A1_COMPLETION = " Put clothes on the sofa, snacks in the plastic storage box, cans in the recycling bin, wooden blocks in the drawer, and fruits in the black storage box."

A2_TEST = '''# Summary: Put clothes on the sofa, snacks in the plastic storage box, cans in the recycling bin, wooden blocks in the drawer, and fruits in the black storage box.
objects = ["jacket", "candy bar", "soda can", "Pepsi can", "jeans", "wooden block", "orange", "chips", "wooden block 2", "apple"]
receptacles = ["recycling bin", "plastic storage box", "black storage box", "sofa", "drawer"]
pick_and_place("jacket",'''

A2_COMPLETION = ''' "sofa")
pick_and_place("candy bar", "plastic storage box")
pick_and_place("soda can", "recycling bin")
pick_and_place("Pepsi can", "recycling bin")
pick_and_place("jeans", "sofa")
pick_and_place("wooden block", "drawer")
pick_and_place("orange", "black storage box")
pick_and_place("chips", "plastic storage box")
pick_and_place("wooden block 2", "drawer")
pick_and_place("apple", "black storage box")'''

A3_TEST = '''objects = ["jacket", "candy bar", "soda can", "Pepsi can", "jeans", "wooden block", "orange", "chips", "wooden block 2", "apple"]
pick_and_place("jacket")
pick_and_toss("candy bar")
pick_and_toss("soda can")
pick_and_toss("Pepsi can")
pick_and_place("jeans")
pick_and_place("wooden block")
pick_and_toss("orange")
pick_and_toss("chips")
pick_and_place("wooden block 2")
pick_and_toss("apple")
# Summary:'''

A3_COMPLETION = " Pick and place clothes and wooden blocks, pick and toss snacks and drinks."

A4_TEST = '''# Summary: Pick and place clothes and wooden blocks, pick and toss snacks and drinks.
objects = ["jacket", "candy bar", "soda can", "Pepsi can", "jeans", "wooden block", "orange", "chips", "wooden block 2", "apple"]
'''

A4_COMPLETION = '''pick_and_place("jacket")
pick_and_place("jeans")
pick_and_place("wooden block")
pick_and_place("wooden block 2")
pick_and_toss("candy bar")
pick_and_toss("soda can")
pick_and_toss("Pepsi can")
pick_and_toss("orange")
pick_and_toss("chips")
pick_and_toss("apple")'''

A5_TEST = '''# Summary: Put clothes on the sofa, snacks in the plastic storage box, cans in the recycling bin, wooden blocks in the drawer, and fruits in the black storage box.
objects = ["'''

A5_COMPLETION = '''clothing", "snack", "can", "wooden block", "fruit"]'''

A6_TEST = '''# Summary: Put clothes on the sofa, snacks in the plastic storage box, cans in the recycling bin, wooden blocks in the drawer, and fruits in the black storage box.
objects = ["clothing", "snack", "can", "wooden block", "fruit"]
receptacles = ["recycling bin", "plastic storage box", "black storage box", "sofa", "drawer"]
pick_and_place("clothing",'''

A6_COMPLETION = ''' "sofa")
pick_and_place("snack", "plastic storage box")
pick_and_place("can", "recycling bin")
pick_and_place("wooden block", "drawer")
pick_and_place("fruit", "black storage box")'''

A7_TEST = '''# Summary: Pick and place clothes and wooden blocks, pick and toss snacks and drinks.
objects = ["clothing", "snack", "can", "wooden block", "fruit"]
'''

A7_COMPLETION = '''pick_and_place("clothing")
pick_and_place("wooden block")
pick_and_toss("snack")
pick_and_toss("can")
pick_and_toss("fruit")'''

# ---------------------------------------------------------------------------
# Walkthrough blocks from the method/experiments sections.
# ---------------------------------------------------------------------------

S31_SUMMARIZATION_TEST = '''objects = ["yellow shirt", "dark purple shirt", "white socks", "black shirt"]
receptacles = ["drawer", "closet"]
pick_and_place("yellow shirt", "drawer")
pick_and_place("dark purple shirt", "closet")
pick_and_place("white socks", "drawer")
pick_and_place("black shirt", "closet")
# Summary:'''

S31_SUMMARIZATION_COMPLETION = (
    " Put light-colored clothes in the drawer and dark-colored clothes in the closet."
)

S31_SELECTION_TEST = '''# Summary: Put light-colored clothes in the drawer and dark-colored clothes in the closet.
objects = ["black socks", "white shirt", "navy socks", "beige shirt"]
receptacles = ["drawer", "closet"]
pick_and_place("black socks",'''

S31_SELECTION_COMPLETION = ''' "closet")
pick_and_place("white shirt", "drawer")
pick_and_place("navy socks", "closet")
pick_and_place("beige shirt", "drawer")'''

S32_SUMMARIZATION_TEST = '''objects = ["yellow shirt", "dark purple shirt", "white socks", "black shirt"]
pick_and_place("yellow shirt")
pick_and_place("dark purple shirt")
pick_and_toss("white socks")
pick_and_place("black shirt")
# Summary:'''

S32_SUMMARIZATION_COMPLETION = " Pick and place shirts, pick and toss socks."

S32_SELECTION_TEST = '''# Summary: Pick and place shirts, pick and toss socks.
objects = ["black socks", "white shirt", "navy socks", "beige shirt"]
'''

S32_SELECTION_COMPLETION = '''pick_and_toss("black socks")
pick_and_place("white shirt")
pick_and_toss("navy socks")
pick_and_place("beige shirt")'''

S33_EXTRACTION_TEST = '''# Summary: Put light-colored clothes in the drawer and dark-colored clothes in the closet.
objects = ["'''

S33_EXTRACTION_COMPLETION = '''light-colored clothing", "dark-colored clothing"]'''

S42_EXAMPLES_ONLY_PROMPT = '''objects = ["yellow shirt", "dark purple shirt", "white socks", "black shirt"]
receptacles = ["drawer", "closet"]
pick_and_place("yellow shirt", "drawer")
pick_and_place("dark purple shirt", "closet")
pick_and_place("white socks", "drawer")
pick_and_place("black shirt", "closet")

objects = ["black socks", "white shirt", "navy socks", "beige shirt"]
receptacles = ["drawer", "closet"]
pick_and_place("black socks",'''

S42_EXAMPLES_ONLY_COMPLETION = ''' "drawer")
pick_and_place("white shirt", "closet")
pick_and_place("navy socks", "drawer")
pick_and_place("beige shirt", "closet")'''

S43_COMMONSENSE_PROMPT = '''# Put objects into their appropriate receptacles.
objects = ["black socks", "white shirt", "navy socks", "beige shirt"]
receptacles = ["drawer", "closet"]
pick_and_place("black socks",'''

S43_COMMONSENSE_COMPLETION = ''' "drawer")
pick_and_place("white shirt", "closet")
pick_and_place("navy socks", "drawer")
pick_and_place("beige shirt", "closet")'''


def join(*blocks: str) -> str:
    return "\n\n".join(blocks)


FILES = {
    DATA / "receptacle_summarization.txt": IC_RECEPTACLE_SUMMARIZATION,
    DATA / "receptacle_selection.txt": IC_RECEPTACLE_SELECTION,
    DATA / "primitive_summarization.txt": IC_PRIMITIVE_SUMMARIZATION,
    DATA / "primitive_selection.txt": IC_PRIMITIVE_SELECTION,
    DATA / "category_extraction.txt": IC_CATEGORY_EXTRACTION,
    APPENDIX / "a1_prompt.txt": join(IC_RECEPTACLE_SUMMARIZATION, A1_TEST),
    APPENDIX / "a1_completion.txt": A1_COMPLETION,
    APPENDIX / "a2_prompt.txt": join(IC_RECEPTACLE_SELECTION, A2_TEST),
    APPENDIX / "a2_completion.txt": A2_COMPLETION,
    APPENDIX / "a3_prompt.txt": join(IC_PRIMITIVE_SUMMARIZATION, A3_TEST),
    APPENDIX / "a3_completion.txt": A3_COMPLETION,
    APPENDIX / "a4_prompt.txt": join(IC_PRIMITIVE_SELECTION, A4_TEST),
    APPENDIX / "a4_completion.txt": A4_COMPLETION,
    APPENDIX / "a5_prompt.txt": join(IC_CATEGORY_EXTRACTION, A5_TEST),
    APPENDIX / "a5_completion.txt": A5_COMPLETION,
    APPENDIX / "a6_prompt.txt": join(IC_RECEPTACLE_SELECTION, A6_TEST),
    APPENDIX / "a6_completion.txt": A6_COMPLETION,
    APPENDIX / "a7_prompt.txt": join(IC_PRIMITIVE_SELECTION, A7_TEST),
    APPENDIX / "a7_completion.txt": A7_COMPLETION,
    SECTIONS / "s31_summarization_prompt.txt": join(
        IC_RECEPTACLE_SUMMARIZATION, S31_SUMMARIZATION_TEST
    ),
    SECTIONS / "s31_summarization_completion.txt": S31_SUMMARIZATION_COMPLETION,
    SECTIONS / "s31_selection_prompt.txt": join(
        IC_RECEPTACLE_SELECTION, S31_SELECTION_TEST
    ),
    SECTIONS / "s31_selection_completion.txt": S31_SELECTION_COMPLETION,
    SECTIONS / "s32_summarization_prompt.txt": join(
        IC_PRIMITIVE_SUMMARIZATION, S32_SUMMARIZATION_TEST
    ),
    SECTIONS / "s32_summarization_completion.txt": S32_SUMMARIZATION_COMPLETION,
    SECTIONS / "s32_selection_prompt.txt": join(
        IC_PRIMITIVE_SELECTION, S32_SELECTION_TEST
    ),
    SECTIONS / "s32_selection_completion.txt": S32_SELECTION_COMPLETION,
    SECTIONS / "s33_extraction_prompt.txt": join(
        IC_CATEGORY_EXTRACTION, S33_EXTRACTION_TEST
    ),
    SECTIONS / "s33_extraction_completion.txt": S33_EXTRACTION_COMPLETION,
    SECTIONS / "s42_examples_only_prompt.txt": S42_EXAMPLES_ONLY_PROMPT,
    SECTIONS / "s42_examples_only_completion.txt": S42_EXAMPLES_ONLY_COMPLETION,
    SECTIONS / "s43_commonsense_prompt.txt": S43_COMMONSENSE_PROMPT,
    SECTIONS / "s43_commonsense_completion.txt": S43_COMMONSENSE_COMPLETION,
}


def main() -> None:
    for path, content in FILES.items():
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content, encoding="utf-8", newline="")
        print(f"wrote {path.relative_to(ROOT)} ({len(content.encode())} bytes)")


if __name__ == "__main__":
    main()
