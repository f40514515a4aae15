#!/usr/bin/env python3
"""Regenerates the JSON/TSV fixtures used by the test suites.

Run from the repository root: python3 fixtures/make_fixtures.py
Output is deterministic; commit the regenerated files.
"""

import json
import math
import os
import random
import re

ROOT = os.path.dirname(os.path.abspath(__file__))

LEMMAS = {
    "is": "be", "was": "be", "are": "be", "were": "be",
    "credited": "credit", "inventing": "invent", "invented": "invent", "invent": "invent",
    "created": "create", "discovered": "discover", "discover": "discover",
    "found": "find", "find": "find", "detected": "detect",
    "destroyed": "destroy", "destroy": "destroy", "born": "bear",
    "assassinated": "assassinate", "killed": "kill", "located": "locate",
    "took": "take", "take": "take", "baked": "bake", "bake": "bake",
    "preparing": "prepare", "builds": "build", "organizes": "organize",
    "did": "do", "cookies": "cookie", "explanations": "explanation",
    "predictions": "prediction",
}

NE = {
    "Alexander Graham Bell": "Person", "Vasco Da Gama": "Person", "Thomas Edison": "Person",
    "Leonardo da Vinci": "Person", "Lee Harvey Oswald": "Person", "Jack Ruby": "Person",
    "Bob": "Person", "John": "Person", "Marie Curie": "Person", "Howard Carter": "Person",
    "Nikola Tesla": "Person", "Tim Berners-Lee": "Person", "Galileo Galilei": "Person",
    "Alexander Fleming": "Person", "Edmund Halley": "Person", "Johannes Gutenberg": "Person",
    "Karl Benz": "Person", "Wright Brothers": "Organization", "Hiram Bingham": "Person",
    "William Herschel": "Person", "James Watt": "Person", "Louis Pasteur": "Person",
    "Heinrich Schliemann": "Person", "Mary Anning": "Person", "Clyde Tombaugh": "Person",
    "India": "Location", "Paris": "Location", "France": "Location", "Porto": "Location",
    "Lisbon": "Location", "Troy": "Location", "Machu Picchu": "Location", "Uranus": "Location",
    "Pluto": "Location", "New York": "Location",
    "D15 M04 Y1452": "Date",
}

SYNSETS = {
    "telephone": ["telephone.n.01"], "phonograph": ["phonograph.n.01"], "car": ["car.n.01"],
    "cat": ["cat.n.01"], "dog": ["dog.n.01"], "feline": ["feline.n.01"],
    "bridge": ["bridge.n.01"], "village": ["village.n.02"], "harbour": ["harbor.n.01"],
    "route": ["route.n.01"], "fridge": ["refrigerator.n.01"], "oven": ["oven.n.01"],
}

RESOURCES = {
    "senses.tsv": """# class<TAB>member lemmas
Achieving_first\tinvent discover create devise originate pioneer
Becoming_aware\tdiscover find detect notice spot
Building\tmake build construct assemble
Killing\tkill assassinate murder slay
Cooking_creation\tbake cook prepare roast
Being_located\tlocate situate
Destroying\tdestroy ruin wreck demolish
Being_born\tbear
Removing\ttake remove
Organization\torganize arrange
Placing\tput place
""",
    "synsets.tsv": """# child<TAB>parent hypernym edges
cat.n.01\tfeline.n.01
feline.n.01\tcarnivore.n.01
dog.n.01\tcanine.n.02
canine.n.02\tcarnivore.n.01
carnivore.n.01\tplacental.n.01
placental.n.01\tmammal.n.01
mammal.n.01\tanimal.n.01
animal.n.01\torganism.n.01
organism.n.01\tliving_thing.n.01
living_thing.n.01\twhole.n.02
whole.n.02\tobject.n.01
object.n.01\tphysical_entity.n.01
physical_entity.n.01\tentity.n.01
telephone.n.01\ttelecom_equipment.n.01
telecom_equipment.n.01\tequipment.n.01
phonograph.n.01\trecord_player.n.01
record_player.n.01\telectronic_equipment.n.01
electronic_equipment.n.01\tequipment.n.01
equipment.n.01\tinstrumentality.n.03
car.n.01\tmotor_vehicle.n.01
motor_vehicle.n.01\tself-propelled_vehicle.n.01
self-propelled_vehicle.n.01\twheeled_vehicle.n.01
wheeled_vehicle.n.01\tvehicle.n.01
vehicle.n.01\tconveyance.n.03
conveyance.n.03\tinstrumentality.n.03
refrigerator.n.01\twhite_goods.n.01
white_goods.n.01\thome_appliance.n.01
oven.n.01\tkitchen_appliance.n.01
kitchen_appliance.n.01\thome_appliance.n.01
home_appliance.n.01\tappliance.n.02
appliance.n.02\tdurables.n.01
bridge.n.01\tstructure.n.01
harbor.n.01\tgeographic_point.n.01
village.n.02\tsettlement.n.01
route.n.01\tway.n.06
instrumentality.n.03\tartifact.n.01
structure.n.01\tartifact.n.01
artifact.n.01\twhole.n.02
#blocklist:
entity.n.01
physical_entity.n.01
object.n.01
whole.n.02
artifact.n.01
instrumentality.n.03
""",
    "stopwords.txt": "\n".join(
        """a about above after again against all am an and any are as at be because been
before being below between both but by can could did do does doing down during each few for from further
had has have having he her here hers herself him himself his i if in into is it its itself just me more most
my myself no nor not now of off on once only or other our ours ourselves out over own same she should so
some such than that the their theirs them themselves then there these they this those through to too under
until up very was we were what when where which while who whom why will with would you your yours yourself
yourselves how whose 's""".split()
    ) + "\n",
    "verbs.tsv": "# base<TAB>past<TAB>participle\nslay\tslew\tslain\nfind\tfound\tfound\nbear\tbore\tborn\n",
    "ne_rules.tsv": "# type<TAB>words|date\nPerson\twords\nOrganization\twords\nLocation\twords\nMisc\twords\nDate\tdate\n",
}


def embeddings():
    s = math.sqrt
    rows = [
        ("dog", [1, 0, 0, 0, 0, 0, 0, 0]),
        ("cat", [0.61, s(1 - 0.61**2), 0, 0, 0, 0, 0, 0]),
        ("car", [0, 0, 1, 0, 0, 0, 0, 0]),
        ("vehicle", [0, 0, 0.78, s(1 - 0.78**2), 0, 0, 0, 0]),
        ("telephone", [0, 0, 0.6, 0, 0.8, 0, 0, 0]),
        ("New_York", [0, 0, 0.07, 0, 0, s(1 - 0.07**2), 0, 0]),
        ("phonograph", [0, 0, 0.5, 0, 0.7, 0, 0.5, 0]),
        ("who", [0, 0, 0, 0, 0, 0, 0, 1]),
        ("what", [0, 0, 0, 0, 0, 0, 0.3, 0.9]),
        ("discovered", [0, 0, 0, 0.4, 0, 0, 0.9, 0]),
        ("found", [0, 0, 0, 0.5, 0, 0, 0.8, 0.1]),
        ("the", [0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1]),
        ("sea", [0.2, 0, 0, 0, 0, 0.9, 0, 0]),
        ("route", [0, 0.3, 0.4, 0, 0, 0.5, 0, 0]),
        ("india", [0, 0, 0, 0, 0, 1, 0.2, 0]),
        ("america", [0, 0, 0, 0, 0, 0.9, 0.3, 0.1]),
    ]
    lines = [f"{len(rows)} 8"]
    for k, v in rows:
        lines.append(k + " " + " ".join(f"{x:.6f}" for x in v))
    return "\n".join(lines) + "\n"


def bracket_tokens(text):
    return re.findall(r"\(|\)|[^\s()]+", text)


def parse_tree(text):
    toks = bracket_tokens(text)
    pos = 0
    leaves = []

    def node():
        nonlocal pos
        assert toks[pos] == "("
        pos += 1
        label = toks[pos]
        pos += 1
        if toks[pos] == "(":
            children = []
            while toks[pos] == "(":
                children.append(node())
            assert toks[pos] == ")"
            pos += 1
            return {"label": label, "children": children}
        words = []
        while toks[pos] != ")":
            words.append(toks[pos])
            pos += 1
        pos += 1
        leaves.append((" ".join(words), label))
        return {"label": label, "token_index": len(leaves) - 1}

    tree = node()
    assert pos == len(toks)
    return tree, leaves


def lemma_of(surface, pos):
    low = surface.lower()
    if low in LEMMAS:
        return LEMMAS[low]
    return low


def token(surface, pos, stopword=False):
    t = {"surface": surface, "lemma": lemma_of(surface, pos), "pos": pos}
    if surface in NE:
        t["ne_type"] = NE[surface]
    syn = SYNSETS.get(t["lemma"])
    if syn:
        t["synsets"] = syn
    if stopword:
        t["stopword"] = True
    return t


def sentence(sid, tree_text, frames, deps=None):
    tree, leaves = parse_tree(tree_text)
    tokens = [token(w, p) for w, p in leaves]
    srl = [
        {"predicate_index": p, "args": [{"label": l, "span": [a, b]} for (l, a, b) in args]}
        for p, args in frames
    ]
    if deps is None:
        deps = auto_deps(tokens, frames)
    return {
        "id": sid,
        "tokens": tokens,
        "constituency": tree,
        "dependencies": [{"head": h, "dependent": d, "relation": r} for h, d, r in deps],
        "srl": srl,
    }


REL = {"A0": "nsubj", "A1": "dobj", "A2": "prep"}


def auto_deps(tokens, frames):
    out = []
    seen = set()
    for p, args in frames:
        for label, a, b in args:
            head = b
            if head == p:
                continue
            rel = REL.get(label, "advmod")
            if (p, head) not in seen:
                seen.add((p, head))
                out.append((p, head, rel))
            for i in range(a, b):
                if i != p and (head, i) not in seen:
                    seen.add((head, i))
                    out.append((head, i, "det" if tokens[i]["pos"] == "DT" else "dep"))
    return out


def question(tagged):
    """`Who/WP created/VBD the/DT telephone/NN ?/.` with `_` joining multi-word tokens."""
    out = []
    for item in tagged.split():
        word, pos = item.rsplit("/", 1)
        out.append(token(word.replace("_", " "), pos))
    return {"tokens": out}


def write_json(path, value):
    full = os.path.join(ROOT, path)
    os.makedirs(os.path.dirname(full), exist_ok=True)
    with open(full, "w") as f:
        json.dump(value, f, indent=1, ensure_ascii=False)
        f.write("\n")


def write_text(path, text):
    full = os.path.join(ROOT, path)
    os.makedirs(os.path.dirname(full), exist_ok=True)
    with open(full, "w") as f:
        f.write(text)


TELEPHONE = sentence(
    "telephone",
    "(S (NP (NNP Alexander Graham Bell)) (VP (VBZ is) (VP (VBN credited) (PP (IN with)"
    " (S (VP (VBG inventing) (NP (DT the) (NN telephone))))))) (. .))",
    [(2, [("A1", 0, 0), ("A2", 3, 6)]), (4, [("A0", 0, 0), ("A1", 5, 6)])],
    deps=[(2, 0, "nsubjpass"), (2, 1, "auxpass"), (2, 3, "prep"), (3, 4, "pcomp"),
          (4, 6, "dobj"), (6, 5, "det"), (2, 7, "punct")],
)

VASCO = sentence(
    "vasco",
    "(S (NP (NNP Vasco Da Gama)) (VP (VBD discovered) (NP (NP (DT the) (NN sea) (NN route))"
    " (PP (TO to) (NP (NNP India))))) (. .))",
    [(1, [("A0", 0, 0), ("A1", 2, 6)])],
    deps=[(1, 0, "nsubj"), (1, 4, "dobj"), (4, 2, "det"), (4, 3, "nn"), (4, 5, "prep"),
          (5, 6, "pobj"), (1, 7, "punct")],
)


def worked_example():
    write_json("worked_example/corpus.json", {"schema_version": 1, "sentences": [TELEPHONE, VASCO]})
    write_json("worked_example/seeds.json", {
        "schema_version": 1,
        "seeds": [{
            "id": "telephone",
            "sentence_ref": "telephone",
            "question": question("Who/WP created/VBD the/DT telephone/NN ?/."),
            "answer_span": [0, 0],
        }],
    })


def bootstrap():
    seeds = []

    def add(sid, sent, q, span):
        seeds.append({"id": sid, "sentence": sent, "question": question(q), "answer_span": span})

    add("leonardo", sentence(
        "leonardo",
        "(S (NP (NNP Leonardo da Vinci)) (VP (VBD was) (VP (VBN born) (PP (IN on) (NP (CD D15 M04 Y1452)))))"
        " (. .))",
        [(2, [("A1", 0, 0), ("AM-TMP", 3, 4)])]),
        "When/WRB was/VBD Leonardo_da_Vinci/NNP born/VBN ?/.", [4, 4])
    add("oswald", sentence(
        "oswald",
        "(S (NP (NNP Lee Harvey Oswald)) (VP (VBD was) (VP (VBN assassinated) (PP (IN by) (NP (NNP Jack Ruby)))))"
        " (. .))",
        [(2, [("A1", 0, 0), ("A0", 3, 4)])]),
        "Who/WP killed/VBD Lee_Harvey_Oswald/NNP ?/.", [4, 4])
    add("paris", sentence(
        "paris",
        "(S (NP (NNP Paris)) (VP (VBZ is) (VP (VBN located) (PP (IN in) (NP (NNP France))))) (. .))",
        [(2, [("A1", 0, 0), ("AM-LOC", 3, 4)])]),
        "Where/WRB is/VBZ Paris/NNP located/VBN ?/.", [3, 4])
    add("porto", sentence(
        "porto",
        "(S (NP (NNP Porto)) (VP (VBZ is) (VP (VBN located) (NP (CD 313) (NNS km)) (PP (IN from) (NP (NNP Lisbon)))))"
        " (. .))",
        [(2, [("A1", 0, 0), ("AM-EXT", 3, 4), ("AM-DIR", 5, 6)])]),
        "How/WRB far/RB is/VBZ Lisbon/NNP from/IN Porto/NNP ?/.", [3, 4])
    add("bob", sentence(
        "bob",
        "(S (NP (NN Yesterday)) (, ,) (NP (NNP Bob)) (VP (VBD took) (NP (NN butter)) (PP (IN from) (NP (DT the) (NN fridge))))"
        " (. .))",
        [(3, [("AM-TMP", 0, 0), ("A0", 2, 2), ("A1", 4, 4), ("A2", 5, 7)])]),
        "Where/WRB did/VBD Bob/NNP take/VB butter/NN from/IN ?/.", [5, 7])
    add("john", sentence(
        "john",
        "(S (NP (NNP John)) (VP (VBD baked) (NP (NNS cookies)) (PP (IN in) (NP (DT the) (NN oven)))) (. .))",
        [(1, [("A0", 0, 0), ("A1", 2, 2), ("AM-LOC", 3, 5)])]),
        "What/WP did/VBD John/NNP bake/VB in/IN the/DT oven/NN ?/.", [2, 2])
    pp_purpose = "(PP (IN for) (NP (NN consumption)))"
    cooking_tree = (
        "(S (NP (NN Cooking)) (VP (VBZ is) (NP (NP (DT the) (NN art) (, ,) (NN technology) (, ,) (NN science)"
        f" (CC and) (NN craft)) (PP (IN of) (S (VP (VBG preparing) (NP (NN food)) {pp_purpose}))))) (. .))"
    )
    add("cooking", sentence("cooking", cooking_tree, [(11, [("A1", 12, 12), ("AM-PNC", 13, 14)])]),
        "What/WP is/VBZ cooking/NN ?/.", [2, 14])
    about = "(PP (IN about) (NP (DT the) (NN universe)))"
    explanations = f"(NP (NP (JJ testable) (NNS explanations) (CC and) (NNS predictions)) {about})"
    form = f"(NP (NP (DT the) (NN form)) (PP (IN of) {explanations}))"
    organizes = f"(VP (VBZ organizes) (NP (NN knowledge)) (PP (IN in) {form}))"
    relative = f"(SBAR (WHNP (WDT that)) (S (VP (VP (VBZ builds)) (CC and) {organizes})))"
    science_tree = (
        f"(S (NP (NN Science)) (VP (VBZ is) (NP (NP (DT a) (JJ systematic) (NN enterprise)) {relative})) (. .))"
    )
    science_args = [("A0", 2, 4), ("R-A0", 5, 5), ("A1", 9, 9), ("AM-MNR", 10, 20)]
    add("science", sentence("science", science_tree, [(6, science_args), (8, science_args)]),
        "What/WP is/VBZ a/DT systematic/JJ enterprise/NN that/WDT builds/VBZ and/CC organizes/VBZ knowledge/NN"
        " in/IN the/DT form/NN of/IN testable/JJ explanations/NNS and/CC predictions/NNS about/IN the/DT universe/NN ?/.",
        [0, 0])
    write_json("bootstrap/seeds.json", {"schema_version": 1, "seeds": seeds})


# Synthetic corpus for the learning-effect runs: (kind, subject, object).
# Subjects of inv/disc/find sentences are people, destroy subjects are not.
SYNTHETIC = [
    ("inv", "Alexander Graham Bell", "the telephone"),
    ("disc", "Marie Curie", "radium"),
    ("dest", "The storm", "the harbour"),
    ("inv", "Johannes Gutenberg", "the printing press"),
    ("dest", "The earthquake", "the temple"),

    ("disc", "Galileo Galilei", "the moons of Jupiter"),
    ("find", "Howard Carter", "the tomb"),
    ("dest", "The avalanche", "the cabin"),
    ("inv", "Karl Benz", "the automobile"),
    ("disc", "Alexander Fleming", "penicillin"),

    ("find", "Hiram Bingham", "Machu Picchu"),
    ("dest", "The flood", "the mill"),
    ("inv", "Tim Berners-Lee", "the web"),
    ("find", "Heinrich Schliemann", "Troy"),
    ("disc", "William Herschel", "Uranus"),

    ("dest", "The tornado", "the barn"),
    ("find", "Mary Anning", "the fossil"),
    ("inv", "James Watt", "the steam engine"),
    ("dest", "The fire", "the library"),
    ("disc", "Louis Pasteur", "vaccination"),

    ("find", "Clyde Tombaugh", "Pluto"),
    ("inv", "Nikola Tesla", "the induction motor"),
    ("dest", "The tsunami", "the pier"),
    ("disc", "Edmund Halley", "the comet"),
    ("find", "Howard Carter", "the golden mask"),

    ("dest", "The war", "the castle"),
    ("inv", "Thomas Edison", "the light bulb"),
    ("find", "Marie Curie", "polonium"),
    ("dest", "The hurricane", "the lighthouse"),
    ("disc", "Alexander Fleming", "lysozyme"),
]

VERB = {"inv": ("invented", "invent"), "disc": ("discovered", "discover"),
        "find": ("found", "find"), "dest": ("destroyed", "destroy")}

EXTRA_NE = {"Jupiter": "Location"}


def noun_phrase(text, first_upper_is_subject):
    words = text.split()
    if text in NE or (len(words) >= 1 and words[0][0].isupper() and words[0] not in ("The",)):
        return f"(NP (NNP {text}))", 1
    parts = []
    count = 0
    if words[0].lower() == "the":
        parts.append(f"(DT {words[0]})")
        words = words[1:]
        count += 1
    if "of" in words:
        k = words.index("of")
        head = words[:k]
        tail = words[k + 1:]
        inner = " ".join(f"(NN {w})" for w in head)
        tail_np = f"(NP (NNP {' '.join(tail)}))" if tail[0][0].isupper() else " ".join(f"(NN {w})" for w in tail)
        np = f"(NP (NP {' '.join(parts)} {inner}) (PP (IN of) {tail_np}))"
        return np, count + len(head) + 1 + (1 if tail[0][0].isupper() else len(tail))
    parts.extend(f"(NN {w})" for w in words)
    count += len(words)
    return "(NP " + " ".join(parts) + ")", count


def synthetic_sentence(i, kind, subj, obj):
    verb, _ = VERB[kind]
    sp, sn = noun_phrase(subj, True)
    op, on = noun_phrase(obj, False)
    tree = f"(S {sp} (VP (VBD {verb}) {op}) (. .))"
    pred = sn
    frames = [(pred, [("A0", 0, sn - 1), ("A1", pred + 1, pred + on)])]
    s = sentence(f"syn{i:02d}", tree, frames)
    for t in s["tokens"]:
        if t["surface"] in EXTRA_NE:
            t["ne_type"] = EXTRA_NE[t["surface"]]
    return s


def references(kind, subj, obj):
    verb, base = VERB[kind]
    subj_q = subj if subj in NE else subj[0].lower() + subj[1:]
    if kind == "dest":
        return [f"What {verb} {obj} ?", f"What did {subj_q} {base} ?"]
    return [f"Who {verb} {obj} ?", f"What did {subj_q} {base} ?"]


def synthetic():
    sentences = []
    refs = {}
    for i, (kind, subj, obj) in enumerate(SYNTHETIC):
        s = synthetic_sentence(i, kind, subj, obj)
        sentences.append(s)
        refs[s["id"]] = references(kind, subj, obj)
    write_json("synthetic/corpus.json", {"schema_version": 1, "sentences": sentences})
    write_json("synthetic/reference.json", {"schema_version": 1, "references": refs})

    edison = sentence(
        "edison",
        "(S (NP (NNP Thomas Edison)) (VP (VBD invented) (NP (DT the) (NN phonograph))) (. .))",
        [(1, [("A0", 0, 0), ("A1", 2, 3)])])
    flood = sentence(
        "flood",
        "(S (NP (DT The) (NN flood)) (VP (VBD destroyed) (NP (DT the) (NN village))) (. .))",
        [(2, [("A0", 0, 1), ("A1", 3, 4)])])
    fire = sentence(
        "fire",
        "(S (NP (DT The) (NN fire)) (VP (VBD destroyed) (NP (DT the) (JJ old) (NN bridge))) (. .))",
        [(2, [("A0", 0, 1), ("A1", 3, 5)])])
    seeds = [
        {"id": "edison-who", "sentence": edison,
         "question": question("Who/WP invented/VBD the/DT phonograph/NN ?/."), "answer_span": [0, 0]},
        {"id": "edison-what", "sentence": edison,
         "question": question("What/WP did/VBD Thomas_Edison/NNP invent/VB ?/."), "answer_span": [2, 3]},
        {"id": "flood-what", "sentence": flood,
         "question": question("What/WP destroyed/VBD the/DT village/NN ?/."), "answer_span": [0, 1]},
        # Planted bad seeds: wrong Wh-word for the answer's type.
        {"id": "edison-what-bad", "sentence": edison,
         "question": question("What/WP invented/VBD the/DT phonograph/NN ?/."), "answer_span": [0, 0]},
        {"id": "fire-who", "sentence": fire,
         "question": question("Who/WP destroyed/VBD the/DT old/JJ bridge/NN ?/."), "answer_span": [0, 1]},
    ]
    write_json("synthetic/seeds.json", {"schema_version": 1, "seeds": seeds})


def metric_cases():
    rng = random.Random(20240611)
    vocab = "who what when where did does is the a sea route to india america discovered found bell telephone".split()
    cases = []
    for k in range(50):
        cand = [rng.choice(vocab) for _ in range(rng.randint(1, 10))]
        refs = []
        for _ in range(rng.randint(1, 3)):
            if rng.random() < 0.5:
                r = list(cand)
                for _ in range(rng.randint(0, 3)):
                    op = rng.random()
                    if op < 0.4 and r:
                        r[rng.randrange(len(r))] = rng.choice(vocab)
                    elif op < 0.7 and len(r) < 10:
                        r.insert(rng.randrange(len(r) + 1), rng.choice(vocab))
                    elif len(r) > 1:
                        del r[rng.randrange(len(r))]
            else:
                r = [rng.choice(vocab) for _ in range(rng.randint(1, 10))]
            refs.append(" ".join(r))
        cases.append({"id": f"case{k:02d}", "candidate": " ".join(cand), "references": refs})
    write_json("metrics/cases.json", {"schema_version": 1, "cases": cases})


def main():
    for name, text in RESOURCES.items():
        write_text(f"resources/{name}", text)
    write_text("resources/embeddings.txt", embeddings())
    worked_example()
    bootstrap()
    synthetic()
    metric_cases()


if __name__ == "__main__":
    main()
