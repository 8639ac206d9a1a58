#!/usr/bin/env python3
"""Generate the bundled synthetic airline review corpus and its annotations.

Output is deterministic for a given --seed. Sentences are unique within each
entity, so deduplication never changes sentence ids.
"""

import argparse
import csv
import random
from pathlib import Path

ENTITIES = {
    # entity: per-aspect probability of (positive, neutral, negative)
    "skyway": {"seat": (0.6, 0.2, 0.2), "staff": (0.7, 0.1, 0.2), "food": (0.3, 0.2, 0.5),
               "ontime": (0.2, 0.1, 0.7), "baggage": (0.4, 0.2, 0.4), "ife": (0.8, 0.1, 0.1)},
    "aerolux": {"seat": (0.8, 0.1, 0.1), "staff": (0.8, 0.1, 0.1), "food": (0.7, 0.2, 0.1),
                "ontime": (0.4, 0.2, 0.4), "baggage": (0.5, 0.2, 0.3), "ife": (0.6, 0.2, 0.2)},
    "bluejet": {"seat": (0.2, 0.2, 0.6), "staff": (0.5, 0.2, 0.3), "food": (0.1, 0.2, 0.7),
                "ontime": (0.7, 0.1, 0.2), "baggage": (0.3, 0.1, 0.6), "ife": (0.2, 0.3, 0.5)},
    "northwind": {"seat": (0.4, 0.3, 0.3), "staff": (0.3, 0.2, 0.5), "food": (0.5, 0.2, 0.3),
                  "ontime": (0.5, 0.2, 0.3), "baggage": (0.7, 0.1, 0.2), "ife": (0.4, 0.3, 0.3)},
    "cloudhop": {"seat": (0.3, 0.2, 0.5), "staff": (0.6, 0.2, 0.2), "food": (0.4, 0.3, 0.3),
                 "ontime": (0.3, 0.1, 0.6), "baggage": (0.5, 0.2, 0.3)},
}

LABELS = {
    "seat": "Seat Comfort",
    "staff": "Cabin Staff",
    "food": "Food and Beverage",
    "ontime": "On-time Performance",
    "baggage": "Baggage Handling",
    "ife": "In-flight Entertainment",
    "null": "Null",
}

SLOTS = {
    "pos": ["great", "excellent", "wonderful", "comfortable", "pleasant", "superb", "fantastic"],
    "neg": ["terrible", "awful", "horrible", "poor", "disappointing", "miserable", "dreadful"],
    "seatn": ["seat", "seats", "legroom", "armrest", "cushion", "recline"],
    "row": ["row 12", "row 23", "the exit row", "the window seat", "the aisle seat", "row 31"],
    "staffn": ["crew", "flight attendant", "cabin crew", "steward", "staff", "purser"],
    "foodn": ["meal", "food", "snack", "sandwich", "pasta", "breakfast", "coffee"],
    "drink": ["coffee", "juice", "tea", "wine", "water"],
    "bagn": ["bag", "luggage", "suitcase", "checked bag", "baggage"],
    "ifen": ["screen", "movie selection", "entertainment system", "film selection", "headphones"],
    "hours": ["two", "three", "four", "five", "six"],
    "city": ["Boston", "Denver", "Chicago", "Seattle", "Miami", "Dallas", "Atlanta", "Phoenix"],
    "day": ["Monday", "Tuesday", "Wednesday", "Thursday", "Friday", "Saturday", "Sunday"],
    "month": ["January", "March", "May", "July", "September", "November"],
    "ordinal": ["second", "third", "fourth", "fifth", "first"],
    "who": ["my wife", "my brother", "two colleagues", "my kids", "a friend", "my parents"],
}

TEMPLATES = {
    ("seat", "pos"): [
        "The {seatn} in {row} was {pos} and the legroom felt generous.",
        "Really {pos} seat with plenty of legroom and a deep recline.",
        "I loved the {pos} cushion and the wide armrest in {row}.",
        "The seat pitch was {pos} and the recline let me sleep in {row}.",
    ],
    ("seat", "neu"): [
        "The {seatn} in {row} was standard with normal legroom.",
        "Seat pitch in {row} was typical and the recline was average.",
        "The seats recline a little and the armrest folds up in {row}.",
    ],
    ("seat", "neg"): [
        "The seat was not {pos} and the legroom was not generous either.",
        "The {seatn} in {row} was {neg} and the legroom was cramped.",
        "A {neg} seat with a broken recline and no legroom at all.",
        "My knees hit the seat in front, {neg} legroom in {row}.",
        "The cushion on the seat in {row} was {neg} and the armrest was broken.",
    ],
    ("staff", "pos"): [
        "The {staffn} was {pos} and friendly with {who}.",
        "A {pos} crew who smiled and helped {who} with everything.",
        "The flight attendant was attentive, {pos} service from the {staffn}.",
        "Friendly {staffn}, {pos} attitude and very helpful with {who}.",
    ],
    ("staff", "neu"): [
        "The {staffn} did the safety demo and the usual service round.",
        "The cabin crew walked the aisle and checked on {who}.",
        "The flight attendant announced the service schedule and the crew collected trash.",
    ],
    ("staff", "neg"): [
        "The {staffn} was not friendly and never {pos} with {who}.",
        "The {staffn} was rude and {neg} to {who}.",
        "A {neg} crew who ignored the call button for an hour.",
        "The flight attendant was unfriendly and the crew service was {neg}.",
        "Rude {staffn} and {neg} attitude toward {who}.",
    ],
    ("food", "pos"): [
        "The {foodn} was {pos} and the {drink} was hot.",
        "Delicious {foodn} with a {pos} menu and fresh {drink}.",
        "I enjoyed the {pos} meal and a cup of {drink} with dessert.",
        "Tasty {foodn} and {pos} {drink} from the menu.",
    ],
    ("food", "neu"): [
        "The {foodn} came with a small cup of {drink}.",
        "A meal cart came through with {foodn} and {drink} for purchase.",
        "They served a {foodn} and {drink} from the menu.",
    ],
    ("food", "neg"): [
        "The {foodn} was not {pos} and the {drink} was not hot.",
        "The {foodn} was {neg} and the {drink} was cold.",
        "Bland {foodn} with a {neg} menu and stale {drink}.",
        "The meal was {neg}, cold {foodn} and watery {drink}.",
        "Awful {foodn} and {neg} {drink} from the menu.",
    ],
    ("ontime", "pos"): [
        "We departed on time and landed early in {city}, {pos} punctuality.",
        "The departure was right on schedule and we arrived early, {pos} timing.",
        "A {pos} on time departure and an early arrival at the gate.",
        "No delay at all and a {pos} early arrival with time for my connection.",
    ],
    ("ontime", "neu"): [
        "The departure board showed our departure time as scheduled.",
        "Boarding started at the posted time and departure followed the schedule.",
        "We pushed back from the gate and the arrival time stayed on schedule.",
    ],
    ("ontime", "neg"): [
        "The incoming flight was late so we had a {hours} hour delay at the gate.",
        "We had to wait for connecting passengers, a {neg} {hours} hour delay.",
        "The incoming flight was delayed and we had to wait for a connecting crew for {hours} hours.",
        "A {neg} delay, we had to wait at the gate because the incoming flight was late.",
        "We missed our connection after a {hours} hour delay, {neg} delay handling.",
    ],
    ("baggage", "pos"): [
        "My {bagn} came out first at the carousel, {pos} baggage handling.",
        "The baggage claim was quick and my {bagn} arrived {pos} and intact.",
        "{pos} baggage handling, my suitcase was on the belt in minutes.",
    ],
    ("baggage", "neu"): [
        "I checked one {bagn} at the counter and collected it at baggage claim.",
        "Baggage claim was at carousel {hours} and the {bagn} came out with the rest.",
        "The {bagn} allowance was one checked bag and one carry on.",
    ],
    ("baggage", "neg"): [
        "They lost my {bagn} and the baggage claim process was {neg}.",
        "My suitcase arrived damaged, {neg} baggage handling.",
        "We waited at the carousel for an hour and my {bagn} never came, {neg}.",
        "The baggage claim desk was {neg} and my {bagn} was broken.",
    ],
    ("ife", "pos"): [
        "The {ifen} was {pos} with a huge movie selection.",
        "A {pos} entertainment screen with new films and good headphones.",
        "I watched three films on the {pos} screen with great headphones.",
        "Great movie selection and a {pos} entertainment system.",
    ],
    ("ife", "neu"): [
        "The entertainment screen showed the map and a few films.",
        "Headphones were handed out before the movie selection started.",
        "The {ifen} had the usual films and a map channel.",
    ],
    ("ife", "neg"): [
        "The {ifen} was not {pos} and the headphones were not working.",
        "The {ifen} was {neg} and the screen kept freezing.",
        "A {neg} entertainment system with old films and broken headphones.",
        "My screen did not work and the movie selection was {neg}.",
        "Tiny screen and a {neg} movie selection with bad headphones.",
    ],
    ("null", "neu"): [
        "We flew from {city} to Houston on a {day} in {month} with {who}.",
        "I booked this trip to {city} for a family visit in {month}.",
        "This was our {ordinal} trip with this airline to {city}.",
        "We traveled to {city} for a conference on {day} with {who}.",
        "It was a {day} evening trip to {city} in {month}.",
    ],
}

POLARITY = {"pos": "Positive", "neu": "Neutral", "neg": "Negative"}

MISSPELLINGS = {"luggage": "luggae", "attendant": "attendent", "comfortable": "confortable"}


def fill(template, rng):
    out = template
    while "{" in out:
        start = out.index("{")
        end = out.index("}", start)
        key = out[start + 1:end]
        out = out[:start] + rng.choice(SLOTS[key]) + out[end + 1:]
    return out[0].upper() + out[1:]


def draw_polarity(probs, rng):
    x = rng.random()
    if x < probs[0]:
        return "pos"
    if x < probs[0] + probs[1]:
        return "neu"
    return "neg"


def emphasize(sentence, polarity, rng):
    x = rng.random()
    if polarity == "neg" and x < 0.15:
        return sentence[:-1] + "!!"
    if polarity == "pos" and x < 0.10:
        return sentence[:-1] + "!"
    if x > 0.97:
        words = sentence.split()
        i = rng.randrange(len(words))
        words[i] = words[i].upper()
        return " ".join(words)
    return sentence


def generate(seed, reviews_per_entity):
    rng = random.Random(seed)
    reviews, annotations = [], []
    for entity, aspects in ENTITIES.items():
        used = set()
        for n in range(reviews_per_entity):
            review_id = f"{entity}-{n:04d}"
            k = rng.randint(2, 5)
            chosen = rng.sample(sorted(aspects), min(k, len(aspects)))
            if rng.random() < 0.4:
                chosen.insert(0, "null")
            sentences, labels = [], []
            for aspect in chosen:
                polarity = "neu" if aspect == "null" else draw_polarity(aspects[aspect], rng)
                for _ in range(50):
                    s = emphasize(fill(rng.choice(TEMPLATES[(aspect, polarity)]), rng), polarity, rng)
                    if rng.random() < 0.05:
                        for right, wrong in MISSPELLINGS.items():
                            s = s.replace(right, wrong)
                    if s not in used:
                        break
                else:
                    continue
                used.add(s)
                sentences.append(s)
                labels.append((LABELS[aspect], POLARITY[polarity]))
            if not sentences:
                continue
            pos = sum(1 for _, p in labels if p == "Positive")
            neg = sum(1 for _, p in labels if p == "Negative")
            rating = max(1, min(5, 3 + pos - neg))
            month = rng.randint(1, 12)
            day = rng.randint(1, 28)
            reviews.append({
                "review_id": review_id,
                "entity_id": entity,
                "date": f"2023-{month:02d}-{day:02d}",
                "rating": rating,
                "text": " ".join(sentences),
            })
            for position, (aspect, polarity) in enumerate(labels):
                row = {"sentence_id": f"{review_id}#{position}", "true_aspect": aspect,
                       "true_sentiment": polarity, "annotator2_aspect": aspect,
                       "annotator2_sentiment": polarity}
                if rng.random() < 0.03:
                    row["annotator2_sentiment"] = "Neutral" if polarity != "Neutral" else "Positive"
                annotations.append(row)
    return reviews, annotations


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=20231)
    ap.add_argument("--reviews-per-entity", type=int, default=100)
    ap.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "mini")
    args = ap.parse_args()
    reviews, annotations = generate(args.seed, args.reviews_per_entity)
    args.out.mkdir(parents=True, exist_ok=True)
    with open(args.out / "reviews.csv", "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=["review_id", "entity_id", "date", "rating", "text"],
                           lineterminator="\n")
        w.writeheader()
        w.writerows(reviews)
    with open(args.out / "annotations.csv", "w", newline="") as f:
        w = csv.DictWriter(f, fieldnames=["sentence_id", "true_aspect", "true_sentiment",
                                          "annotator2_aspect", "annotator2_sentiment"],
                           lineterminator="\n")
        w.writeheader()
        w.writerows(annotations)
    print(f"{len(reviews)} reviews, {len(annotations)} annotated sentences -> {args.out}")


if __name__ == "__main__":
    main()
