#!/usr/bin/env python3
"""Generate the bundled toy corpus (src/semfold/data/toy_corpus.txt).

The corpus is handcrafted around three topic families (animals, vehicles,
professions) plus nature and household padding.  Design rules:

* every word used by the bundled sequence datasets (and their queries)
  appears in several sentences;
* no token at all may appear in fewer than MIN_SUPPORT sentences (hard
  assert, reading-appendix padding): a term seen in one or two snippets
  gets a near-degenerate fingerprint that a 50% subsample cannot identify;
* people get one document each built from four frames (full name,
  surname only, first name only, joint) with rotated specialty words, so
  every name token shows up in at least three sentences and no two
  documents share the same specialty pair;
* class documents (physicists, mathematicians, actors) repeat frames of
  the matching individual documents, which pulls them into the same map
  cells as those individuals;
* related entities co-occur in shared sentences (fox/wolf/coyote,
  dog/cat, mice/rodent) so their fingerprints share grid cells.

Run from the repository root:  python3 scripts/gen_toy_corpus.py
"""

from __future__ import annotations

import re
import sys
from collections import Counter
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
DATA = ROOT / "src" / "semfold" / "data"
OUT_PATH = DATA / "toy_corpus.txt"

# ---------------------------------------------------------------------------
# people
# ---------------------------------------------------------------------------

PHYS_TOPICS = [
    "atoms", "quantum", "relativity", "radiation", "particles", "gravity",
    "energy", "matter", "light", "electrons", "waves", "mechanics",
    "heat", "magnetism", "optics", "thermodynamics",
]

# Standard-frame physicists; Bohr, Einstein, Wigner, Pauli and von Helmholtz
# get special documents below.
PHYSICISTS = [
    ("marie", "curie"),
    ("hans", "bethe"),
    ("peter", "debye"),
    ("otto", "stern"),
    ("pascual", "jordan"),
    ("felix", "bloch"),
    ("max", "planck"),
    ("richard", "feynman"),
    ("arnold", "sommerfeld"),
    ("enrico", "fermi"),
    ("lev", "landau"),
    ("steven", "weinberg"),
    ("james", "franck"),
    ("karl", "weierstrass"),
    ("paul", "dirac"),
]

SINGER_GENRES = [
    "pop", "rock", "soul", "country", "blues", "jazz",
    "gospel", "disco", "folk", "rap", "ballads", "reggae",
]

TWO_TOKEN_SINGERS = [
    ("elton", "john"),
    ("kurt", "cobain"),
    ("stevie", "wonder"),
    ("rod", "stewart"),
    ("diana", "ross"),
    ("marvin", "gaye"),
    ("aretha", "franklin"),
    ("bonnie", "tyler"),
    ("elvis", "presley"),
    ("jackson", "browne"),
    ("johnny", "cash"),
    ("linda", "ronstadt"),
    ("tina", "turner"),
    ("joe", "cocker"),
    ("chaka", "khan"),
    ("eric", "clapton"),
    ("willie", "nelson"),
    ("hank", "williams"),
    ("mariah", "carey"),
    ("ray", "charles"),
    ("chuck", "berry"),
    ("alicia", "keys"),
    ("bryan", "ferry"),
    ("dusty", "springfield"),
    ("donna", "summer"),
    ("james", "taylor"),
    ("james", "brown"),
    ("carole", "king"),
    ("buddy", "holly"),
    ("bruce", "springsteen"),
    ("dolly", "parton"),
    ("otis", "redding"),
    ("meat", "loaf"),
    ("phil", "collins"),
    ("pete", "townshend"),
    ("roy", "orbison"),
    ("celine", "dion"),
    ("alison", "krauss"),
    ("katy", "perry"),
    ("nancy", "sinatra"),
]

SOLO_SINGERS = {
    "madonna": ("pop", "disco"),
    "rihanna": ("pop", "reggae"),
    "cher": ("pop", "ballads"),
    "eminem": ("rap", "rap"),
}

ACTOR_GENRES = ["drama", "comedy", "action", "thriller", "romance", "adventure"]

ACTORS = [
    ("pamela", "anderson"),
    ("tom", "hanks"),
    ("charlize", "theron"),
    ("tom", "cruise"),
    ("angelina", "jolie"),
    ("brad", "pitt"),
]


def physicist_docs() -> list[str]:
    docs = []
    for i, (first, last) in enumerate(PHYSICISTS):
        t1 = PHYS_TOPICS[i % 16]
        t2 = PHYS_TOPICS[(i + 5) % 16]
        s2 = (
            f"{last} won the nobel prize for research on {t1}."
            if i % 2 == 0
            else f"{last} wrote famous papers about {t1}."
        )
        docs.append(
            f"{first} {last} was a physicist who studied {t1} and {t2}. "
            f"{s2} "
            f"{first} taught students about {t2} at the university. "
            f"{first} and {last} explained {t1} in famous lectures."
        )
    docs.append(
        "hermann von helmholtz was a physicist who studied waves and heat. "
        "von helmholtz won the nobel prize for research on waves. "
        "helmholtz wrote famous papers about heat. "
        "hermann taught students about waves at the university. "
        "hermann von helmholtz explained waves and heat in famous lectures."
    )
    docs.append(
        "niels bohr was a physicist who studied atoms and quantum theory. "
        "bohr won the nobel prize for research on atoms. "
        "niels taught students about quantum theory at the university. "
        "niels and bohr explained atoms in famous lectures. "
        "niels bohr and eugene wigner explained quantum theory in famous lectures. "
        "niels bohr and max planck explained atoms in famous lectures."
    )
    docs.append(
        "albert einstein was a physicist who studied relativity and light. "
        "einstein won the nobel prize for research on light. "
        "albert taught students about relativity at the university. "
        "albert and einstein explained gravity in famous lectures. "
        "albert einstein and wolfgang pauli explained relativity and mathematics in famous lectures. "
        "albert einstein and enrico fermi explained mechanics in famous lectures."
    )
    docs.append(
        "eugene wigner was a physicist who loved mathematics and symmetry. "
        "wigner studied quantum theory and mathematics. "
        "eugene taught students about symmetry at the university. "
        "wigner wrote famous papers about mathematics."
    )
    docs.append(
        "wolfgang pauli was a physicist who loved mathematics and logic. "
        "pauli studied mechanics and mathematics. "
        "wolfgang taught students about particles at the university. "
        "pauli wrote famous papers about logic."
    )
    return docs


def singer_docs() -> list[str]:
    docs = []
    s1_frames = [
        "{first} {last} is a famous singer of {g} music.",
        "{first} {last} is a famous {g} singer on the radio.",
    ]
    s2_frames = [
        "{last} sang {g} songs on stage for fans.",
        "{last} sang {g} hits on stage for fans.",
    ]
    s3_frames = [
        "{first} performed {g} tunes in concerts.",
        "{first} performed {g} melodies on tour.",
        "{first} performed {g} numbers for the crowd.",
    ]
    for i, (first, last) in enumerate(TWO_TOKEN_SINGERS):
        g1 = SINGER_GENRES[i % 12]
        g2 = SINGER_GENRES[(i + 1 + i // 12) % 12]
        docs.append(
            s1_frames[i % 2].format(first=first, last=last, g=g1)
            + " "
            + s2_frames[i % 2].format(last=last, g=g2)
            + " "
            + s3_frames[i % 3].format(first=first, g=g1)
            + f" {first} and {last} recorded {g2} albums in a studio."
        )
    for name, (g1, g2) in SOLO_SINGERS.items():
        doc = (
            f"{name} is a famous singer of {g1} music. "
            f"{name} sang {g2} songs on stage for fans. "
            f"{name} performed {g1} tunes in concerts."
        )
        if name == "eminem":
            doc += " eminem performed rap tunes with madonna in concerts."
        docs.append(doc)
    docs.append(
        "jerry lee lewis is a famous singer of rock music. "
        "lewis sang blues songs on stage for fans. "
        "jerry performed rock tunes in concerts. "
        "lee played wild piano numbers in the club. "
        "jerry lee lewis recorded rock albums in a studio."
    )
    return docs


def actor_docs() -> list[str]:
    docs = []
    for i, (first, last) in enumerate(ACTORS):
        g1 = ACTOR_GENRES[i % 6]
        g2 = ACTOR_GENRES[(i + 2) % 6]
        doc = (
            f"{first} {last} is a famous actor who stars in {g1} movies. "
            f"{last} acted in {g2} films in hollywood. "
            f"{first} won awards for acting on screen. "
            f"{first} and {last} starred in {g1} movies together."
        )
        if (first, last) == ("angelina", "jolie"):
            doc += " angelina jolie and charlize theron starred in famous movies together."
        if (first, last) == ("brad", "pitt"):
            doc += " brad pitt and tom hanks starred in famous movies together."
        docs.append(doc)
    return docs


CLASS_DOCS = [
    # class words used by the bundled queries; the studied/loved sentences
    # repeat individual document frames so the class snippets land in the
    # same cells as those individuals
    "physicists study the laws of nature in laboratories. "
    "physicists studied quantum theory and mathematics. "
    "physicists studied mechanics and mathematics. "
    "physicists like wigner and pauli loved mathematics. "
    "physicists like curie and planck studied atoms. "
    "physicists like feynman and fermi studied mechanics. "
    "famous physicists wrote papers about atoms and light.",
    "mathematicians study mathematics and write proofs. "
    "mathematicians loved mathematics and logic. "
    "mathematicians write theorems and proofs about numbers. "
    "mathematicians like wigner and pauli loved mathematics. "
    "mathematicians loved mathematics and symmetry.",
    "actors starred in movies and films in hollywood. "
    "actors like hanks and theron starred in famous movies. "
    "famous actors won awards for acting on screen. "
    "actors acted in drama films in hollywood.",
    "singers performed songs in concerts for fans. "
    "famous singers recorded albums of music in a studio. "
    "singers practice tunes before the show.",
    "the actor studies lines for the play. "
    "the actor studies lines before the show. "
    "the actor stars in famous films and movies.",
    "fans cheer at concerts for famous singers. "
    "fans like songs and cheer at the stage.",
    "scientists run experiments in laboratories. "
    "scientists made discoveries about nature. "
    "physicists made discoveries about the laws of nature.",
    "students study mathematics and physics at the university. "
    "students learn theorems and write proofs. "
    "students run experiments in the physics class. "
    "students like music and mathematics.",
    "the professor taught physics at the university for many years. "
    "the professor and the students solve equations in class. "
    "physicists solve equations about energy and matter.",
    "children like games and funny stories. "
    "children play games in the park after school. "
    "children learn music and mathematics at school. "
    "children practice music at school.",
    "children read funny stories in the library. "
    "students read old books in the library. "
    "students read books about physics at the university.",
    "many fans want to be singers on the stage. "
    "many children want to be pilots one day. "
    "many students want to be doctors one day.",
    "doctors help people at the hospital. "
    "doctors help people at the hospital in the night. "
    "doctors study at the university for many years.",
    "the jazz band plays music with piano and drums on stage. "
    "the jazz band plays music with drums and piano in the club. "
    "the old band played jazz tunes in the club.",
    "the farmer sells wool at the market. "
    "the trader sells tools at the market.",
    "the player runs every morning at the field. "
    "the crowd of people watches the player at the field.",
]

# ---------------------------------------------------------------------------
# animals, farm, nature
# ---------------------------------------------------------------------------

ANIMAL_DOCS = [
    # predator cluster: fox, wolf and coyote share frames and co-occur
    "the fox is a wild predator that hunts in the forest at night. "
    "the fox has red fur and a long tail. "
    "the fox and the wolf hunt small prey after dark. "
    "the fox waits near the chicken coop at night.",
    "the wolf is a wild predator that hunts in the forest at night. "
    "the wolf howls at the moon in the cold forest. "
    "the wolf and the coyote eat rabbit and mice in the cold winter. "
    "the wolf chases the deer across the deep snow.",
    "the coyote is a wild predator that hunts in the desert at night. "
    "the coyote and the fox hunt small prey near the fields. "
    "the coyote howls in the desert after dark.",
    # pets
    "the cat is a quiet pet that likes to play with a ball of yarn. "
    "the cat purrs and sleeps in a warm basket. "
    "the cat and the kitten eat salmon from a bowl. "
    "the cat chases the mice in the old barn.",
    "the kitten plays with yarn in the warm basket. "
    "the kitten purrs and sleeps near the cat. "
    "the kitten drinks milk from a bowl.",
    "the dog is a loyal pet that likes to sleep in the yard. "
    "the dog barks at the gate in the evening. "
    "the dog and the cat play together in the garden. "
    "the loyal dog guards the house and barks at night.",
    # big animals
    "the lion is the king of the savanna and roars loudly. "
    "the lion rests in the tall grass at noon. "
    "the lion and the tiger have sharp teeth and hunt at night.",
    "the tiger hunts in the dark jungle at night. "
    "the tiger has dark fur and a long tail. "
    "the tiger roars loudly in the deep jungle.",
    "the elephant is the largest animal of the savanna. "
    "the elephant likes water and rolls in the mud. "
    "the elephant and the giraffe eat leaves from tall trees.",
    "the giraffe has long legs and eats leaves from the tall trees. "
    "the giraffe and the elephant share the tall trees of the savanna.",
    "the monkey jumps between the branches of the jungle. "
    "the monkey plays in the jungle trees in the morning.",
    "the bear has strong legs and catches salmon in the mountain stream. "
    "the bear sleeps in the deep forest in the winter. "
    "the bear eats honey from the hive.",
    "the deer grazes at the edge of the forest. "
    "the deer leaps over the fence in the evening. "
    "the deer drinks water from the stream.",
    # prey and rodents
    "the rabbit nibbles the grass in the garden. "
    "the rabbit and the squirrel hide from the hawk in the field. "
    "the rabbit hides in the hedge from the fox.",
    "the squirrel nibbles nuts in the autumn forest. "
    "the squirrel jumps between the branches of the oak. "
    "the squirrel hides nuts for the winter.",
    "mice eat seeds in the barn at night. "
    "mice hide from the owl in the quiet field. "
    "the rodent and the mice eat grain in the barn.",
    "a rodent is a small animal with sharp teeth. "
    "a rodent eats seeds and roots in the field.",
    "the hawk flies high over the field. "
    "the hawk dives fast and catches the prey. "
    "the owl and the hawk have sharp eyes at night.",
    "the owl hunts at night in the quiet forest. "
    "the owl watches the field with sharp eyes.",
    # farm
    "the cow gives milk on the farm every morning. "
    "the cow grazes on the green grass in the meadow. "
    "the cow and the goat eat grain from the trough.",
    "the goat jumps on the high hillside in the morning. "
    "the goat and the sheep eat grass on the hillside. "
    "the goat jumps over the fence near the barn.",
    "the sheep gives wool in the spring. "
    "the shepherd counts the sheep in the evening. "
    "the shepherd counts the sheep at dawn.",
    "the horse has strong legs and runs across the field. "
    "the horse carries the farmer to the market. "
    "the horse eats hay in the winter stable. "
    "the horse rests in the stable at dusk.",
    "the pig rolls in the mud near the barn. "
    "the pig eats roots and seeds from the trough.",
    "the chicken sleeps in the coop at night. "
    "the chicken eats seeds in the yard.",
    "the duck swims across the quiet pond. "
    "the duck and the goose fly south in the autumn.",
    "the goose waits at the farm gate in the morning. "
    "the goose guards the yard in the evening.",
    # small creatures and water life
    "the frog hunts flies near the pond at night. "
    "the frog catches flies near the pond in the summer. "
    "the frog jumps in the cold water of the pond.",
    "flies buzz near the barn in the summer. "
    "flies buzz in the warm kitchen.",
    "bees make honey in the hive. "
    "bees make honey in the summer. "
    "bees buzz between the flowers in the spring. "
    "bees fly between the flowers in the garden.",
    "salmon swim in the cold river in the spring. "
    "salmon swim from the sea to the mountain stream.",
    "the whale is the largest animal of the ocean. "
    "the whale dives deep and swims under the sea.",
    "the dolphin leaps over the waves near the boat. "
    "the dolphin swims fast in the ocean.",
]

NATURE_DOCS = [
    "green grass grows in the meadow after the rain. "
    "the gardener cuts the grass in the spring.",
    "the farmer cuts the hay in the meadow. "
    "farmers harvest grain from the field in the summer. "
    "farmers harvest grain and hay in the summer.",
    "red leaves fall from the trees in the autumn. "
    "the gardener gathers the leaves in the garden.",
    "water flows in the river to the lake. "
    "the river flows from the mountain to the sea. "
    "children play in the cold water of the lake.",
    "people sleep at night in the quiet town. "
    "the cat and the dog sleep in the house at night.",
    "children kick a ball in the park. "
    "the children kick the ball across the field.",
    "the oak grows tall at the edge of the forest. "
    "acorns fall from the oak in the autumn. "
    "the squirrel hides acorns under the oak.",
    "snow falls on the quiet fields in the winter. "
    "children play in the deep snow.",
    "rain falls on the town in the autumn. "
    "rain falls on the fields in the spring.",
    "the moon rises over the lake at night. "
    "the sun rises over the fields in the morning. "
    "the moon shines on the quiet town at night. "
    "the sun shines on the meadow in the summer.",
]

# ---------------------------------------------------------------------------
# padding: template documents with rotated word pools
# ---------------------------------------------------------------------------

PAD_ANIMALS = [
    "badger", "otter", "beaver", "hedgehog", "weasel", "marten", "lynx",
    "boar", "moose", "heron", "stork", "swan", "raven", "crow", "magpie",
    "mole",
]
PAD_PLACES = ["river", "meadow", "marsh", "valley", "grove", "hedge"]
PAD_REGIONS = ["north", "south", "east", "west"]
PAD_VERBS = ["finds", "eats", "gathers", "hides", "watches", "follows"]
PAD_OBJECTS = ["seeds", "berries", "roots", "insects", "worms", "snails"]
PAD_SEASONS = ["spring", "summer", "autumn", "winter"]
PAD_TIMES = ["dawn", "dusk", "noon", "midnight"]

PAD_VEHICLES = [
    "truck", "car", "bus", "train", "boat", "ship", "plane", "helicopter",
    "bicycle", "motorcycle", "tractor", "van", "taxi", "wagon", "sled",
    "ferry", "barge", "scooter", "jeep", "tram",
]
PAD_WAYS = ["road", "track", "canal", "trail"]
PAD_DESTS = ["town", "harbor", "depot", "bridge"]
PAD_CARGOS = ["goods", "tools", "timber", "bricks", "mail", "crates"]
PAD_USERS = ["farmer", "trader", "builder", "pilots"]
PAD_KEEPERS = ["driver", "worker", "courier", "rider"]
PAD_SPOTS = ["shed", "garage", "station", "wharf"]

PAD_THINGS = [
    "kettle", "lamp", "clock", "broom", "ladder", "bucket", "hammer",
    "needle", "rope", "candle", "mirror", "stove",
]
PAD_ROOMS = ["kitchen", "cellar", "attic", "workshop"]
PAD_CRAFTS = ["cook", "carpenter", "cleaner", "tailor"]
PAD_FREQS = ["morning", "evening", "day", "week"]


def pad_animal_docs() -> list[str]:
    docs = []
    n = len(PAD_ANIMALS)
    for i, s in enumerate(PAD_ANIMALS):
        partner = PAD_ANIMALS[(i + 1) % n]
        docs.append(
            f"the {s} lives near the {PAD_PLACES[i % 6]} in the {PAD_REGIONS[i % 4]}. "
            f"the {s} {PAD_VERBS[(i + 1) % 6]} {PAD_OBJECTS[(i + 2) % 6]} in the {PAD_SEASONS[(i + 3) % 4]}. "
            f"the {s} and the {partner} share the {PAD_PLACES[(i + 3) % 6]} at {PAD_TIMES[(i + 1) % 4]}."
        )
    return docs


def pad_vehicle_docs() -> list[str]:
    docs = []
    for i, s in enumerate(PAD_VEHICLES):
        docs.append(
            f"the {s} moves along the {PAD_WAYS[i % 4]} to the {PAD_DESTS[(i + 1) % 4]}. "
            f"the {s} carries {PAD_CARGOS[i % 6]} for the {PAD_USERS[(i + 2) % 4]}. "
            f"the {PAD_KEEPERS[i % 4]} parks the {s} near the {PAD_SPOTS[(i + 3) % 4]}."
        )
    return docs


def pad_thing_docs() -> list[str]:
    docs = []
    for i, s in enumerate(PAD_THINGS):
        docs.append(
            f"the {s} stands in the {PAD_ROOMS[i % 4]} of the house. "
            f"the {PAD_CRAFTS[(i + 1) % 4]} uses the {s} every {PAD_FREQS[(i + 2) % 4]}."
        )
    return docs


def all_documents() -> list[str]:
    return (
        physicist_docs()
        + singer_docs()
        + actor_docs()
        + CLASS_DOCS
        + ANIMAL_DOCS
        + NATURE_DOCS
        + pad_animal_docs()
        + pad_vehicle_docs()
        + pad_thing_docs()
    )


def experiment_words() -> set[str]:
    words: set[str] = set()
    for name in ("experiment_fox.txt", "experiment_physicists.txt"):
        for line in (DATA / name).read_text(encoding="utf-8").splitlines():
            words.update(re.split(r"[^\w]+", line.lower()))
    words.discard("")
    # query-only words from the bundled inference transcripts
    words.update("fox eminem niels bohr albert einstein tom cruise".split())
    words.update("angelina jolie brad pitt physicists mathematicians actors".split())
    return words


MIN_SUPPORT = 4

READING_FRAMES = [
    "students read about the {w} at the library.",
    "children read about the {w} at school.",
    "the professor read about the {w} at the university.",
    "many students read about the {w} at school.",
    "the children read about the {w} in the library.",
    "many people read about the {w} at the market.",
]


def count_support(docs: list[str]) -> tuple[int, Counter[str]]:
    sentence_count = 0
    token_sentences: Counter[str] = Counter()
    for doc in docs:
        for sentence in re.split(r"[.!?]+", doc):
            tokens = sentence.split()
            if not tokens:
                continue
            sentence_count += 1
            for token in set(tokens):
                token_sentences[token] += 1
    return sentence_count, token_sentences


def reading_appendix(docs: list[str]) -> list[str]:
    """Pad every rare token up to MIN_SUPPORT sentence appearances.

    Rotating frames keep the filler sentences dissimilar so they do not
    all collapse onto a single map cell.
    """
    _, support = count_support(docs)
    extra: list[str] = []
    cursor = 0
    for token in sorted(support):
        for _ in range(MIN_SUPPORT - support[token]):
            extra.append(READING_FRAMES[cursor % len(READING_FRAMES)].format(w=token))
            cursor += 1
    return [" ".join(extra[i : i + 8]) for i in range(0, len(extra), 8)]


def main() -> int:
    docs = all_documents()
    docs += reading_appendix(docs)
    sentence_count, token_sentences = count_support(docs)

    singletons = sorted(t for t, n in token_sentences.items() if n < MIN_SUPPORT)
    missing = sorted(experiment_words() - set(token_sentences))
    cap = 0.4 * sentence_count
    vocab = [t for t, n in token_sentences.items() if n <= cap]
    doubles = sorted(t for t, n in token_sentences.items() if n == 2)
    capped = sorted(t for t, n in token_sentences.items() if n > cap)

    print(f"documents:         {len(docs)}")
    print(f"sentences:         {sentence_count}")
    print(f"distinct tokens:   {len(token_sentences)}")
    print(f"vocab at 40% cap:  {len(vocab)} (capped out: {capped})")
    print(f"tokens in exactly 2 sentences: {len(doubles)}")
    if singletons:
        print(f"TOKENS BELOW MIN SUPPORT ({len(singletons)}): {singletons}")
    if missing:
        print(f"MISSING EXPERIMENT WORDS ({len(missing)}): {missing}")
    if singletons or missing:
        return 1

    OUT_PATH.write_text("\n".join(docs) + "\n", encoding="utf-8")
    print(f"wrote {OUT_PATH}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
