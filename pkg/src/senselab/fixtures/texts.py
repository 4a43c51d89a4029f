"""Text pools for the bundled corpus, authored against the rubric.

Every template family targets one rubric category, and the generator
verifies with the real engine that each composed inquiry lands exactly
where it was authored to land.  Sub-Emerging pools must therefore stay
free of hypothesis cues, interpretation cues, and runs of step lines.
"""

from __future__ import annotations

import random

from senselab.protocol import SensorType

# Per-sensor topic material: titles, label sets, and subject nouns.
TOPICS: dict[SensorType, dict] = {
    SensorType.HEART_RATE: {
        "titles": [
            "Heart rate test", "My pulse", "Pulse after running", "Heart beats",
            "Resting heart rate", "Exercise and pulse", "Pulse experiment",
            "Heart rate of my group", "How fast is my heart",
        ],
        "labels": [
            ("sitting", "after running"),
            ("resting", "jumping jacks", "after rest"),
            ("me", "my friend"),
            ("before lunch", "after lunch"),
            ("sitting down", "star jumps", "walking"),
        ],
        "subjects": ["my pulse", "our heart rates", "the heart sensor reading"],
        "conditions": ["running", "sitting still", "doing star jumps", "resting"],
    },
    SensorType.TEMP_HUMIDITY: {
        "titles": [
            "Hot or cold", "Classroom temperature", "Temperature test",
            "Warm and cool spots", "Temperature around school", "Air test",
            "Temperature and humidity", "How warm is our room",
        ],
        "labels": [
            ("inside", "outside"),
            ("by the window", "by the door"),
            ("morning", "afternoon"),
            ("sunny spot", "shady spot"),
            ("near the heater", "far corner"),
        ],
        "subjects": ["the temperature", "the classroom air", "the humidity"],
        "conditions": ["by the window", "outside", "near the heater", "in the shade"],
    },
    SensorType.LIGHT_UV: {
        "titles": [
            "Sunlight test", "UV through glass", "Light levels", "Bright or dark",
            "Sunscreen and UV", "Light around the room", "UV outside",
            "Which is brighter",
        ],
        "labels": [
            ("in the sun", "in the shade"),
            ("no foil", "with foil"),
            ("window open", "window closed"),
            ("lamp", "daylight"),
            ("no sunscreen", "with sunscreen"),
        ],
        "subjects": ["the light level", "the UV index", "the brightness"],
        "conditions": ["in the sun", "under the lamp", "behind glass", "in the shade"],
    },
    SensorType.CONDUCTANCE: {
        "titles": [
            "Milk conductivity", "Salt water test", "What conducts", "Water vs juice",
            "Conductance of drinks", "Salty or not", "Liquids test",
            "Electric liquids",
        ],
        "labels": [
            ("tap water", "salt water"),
            ("full fat milk", "trim milk"),
            ("juice", "water"),
            ("fresh water", "sea water"),
            ("plain water", "sports drink"),
        ],
        "subjects": ["the conductance", "the current reading", "the probe reading"],
        "conditions": ["salt water", "milk", "juice", "tap water"],
    },
    SensorType.BODY_TEMP: {
        "titles": [
            "Body temperature", "Forehead vs hand", "Skin temperature",
            "Warm hands", "Temperature of my skin", "Body heat test",
            "Who is warmest",
        ],
        "labels": [
            ("forehead", "hand"),
            ("me", "classmate"),
            ("before exercise", "after exercise"),
            ("left hand", "right hand"),
        ],
        "subjects": ["my skin temperature", "the body temp reading"],
        "conditions": ["after running", "holding ice", "after lunch"],
    },
    SensorType.VOC: {
        "titles": [
            "Smelly markers", "Air quality", "What smells most", "VOC test",
            "Sniff test", "Fumes in the room", "Cleaning spray test",
            "Air near the bins",
        ],
        "labels": [
            ("marker", "fresh air"),
            ("hand sanitiser", "nothing"),
            ("perfume", "plain air"),
            ("whiteboard pen", "outside air"),
        ],
        "subjects": ["the VOC level", "the air reading", "the fumes"],
        "conditions": ["near the marker", "after spraying", "by the open window"],
    },
}

# Plain observation sentences: no hypothesis cues, no interpretation cues,
# and they never start with a step verb.
_OBSERVATIONS = [
    "We measured {subject} {condition}.",
    "Our group tried {condition} and wrote down the numbers.",
    "The sensor showed different numbers {condition}.",
    "We looked at {subject} with the sensor.",
    "Today we tested {subject}.",
    "The numbers changed when we tried {condition}.",
]

_PLAIN_NOTES = [
    "The numbers were different each time.",
    "It was fun to watch the numbers change.",
    "We want to try this again next time.",
    "The second reading was the biggest.",
    "",
    "",
]

# Hypothesis sentences (exactly one cue family each).
_HYPOTHESES = [
    "I think {subject} will be higher {condition}.",
    "I predict {subject} will go up {condition}.",
    "We expected {subject} to change {condition}.",
    "My hypothesis is that {subject} changes {condition}.",
    "I think the number {condition} will be bigger.",
]

# Interpretation sentences for notes or description tails.
_INTERPRETATIONS = [
    "The reading was higher {condition} because there was more going on.",
    "This shows that {subject} depends on what you test.",
    "The difference happened because of the conditions we chose.",
    "The last number was lower, which means the change really mattered.",
    "Our numbers went up, therefore the test condition made a difference.",
]

# Method step lines; at least two make a procedure.
_STEP_LINES = [
    "Plug the sensor into the laptop",
    "Hold the sensor steady",
    "Record the number on the screen",
    "Wait one minute between readings",
    "Repeat the reading three times",
    "Compare the numbers at the end",
    "Place the sensor {condition}",
    "Measure again {condition}",
]


def _fill(template: str, topic: dict, rng: random.Random) -> str:
    return template.format(
        subject=rng.choice(topic["subjects"]),
        condition=rng.choice(topic["conditions"]),
    )


def compose_null(sensor: SensorType, rng: random.Random) -> dict:
    """Title only; zero or one usable label; no reasoning anywhere."""
    topic = TOPICS[sensor]
    variant = rng.randrange(3)
    if variant == 0:
        labels = [""]
    elif variant == 1:
        labels = ["test"]
    else:
        labels = ["test", "test"]  # duplicates never count as distinct
    return {
        "title": rng.choice(topic["titles"]),
        "description": "",
        "notes": "",
        "labels": labels,
    }


def compose_naive(sensor: SensorType, rng: random.Random) -> dict:
    topic = TOPICS[sensor]
    label_set = list(rng.choice(topic["labels"]))
    description = _fill(rng.choice(_OBSERVATIONS), topic, rng) if rng.random() < 0.7 else ""
    notes = rng.choice(_PLAIN_NOTES) if rng.random() < 0.5 else ""
    return {
        "title": rng.choice(topic["titles"]),
        "description": description,
        "notes": notes,
        "labels": label_set,
    }


def compose_emerging(sensor: SensorType, rng: random.Random) -> dict:
    topic = TOPICS[sensor]
    label_set = list(rng.choice(topic["labels"]))
    hypothesis = _fill(rng.choice(_HYPOTHESES), topic, rng)
    interpretation = _fill(rng.choice(_INTERPRETATIONS), topic, rng)
    variant = rng.randrange(4)
    if variant == 0:  # hypothesis only
        description = hypothesis
        notes = rng.choice(_PLAIN_NOTES)
    elif variant == 1:  # interpretation only
        description = _fill(rng.choice(_OBSERVATIONS), topic, rng)
        notes = interpretation
    elif variant == 2:  # both, but no method steps
        description = hypothesis
        notes = interpretation
    else:  # hypothesis plus steps, no interpretation
        steps = rng.sample(_STEP_LINES[:6], 2)
        description = hypothesis + "\n" + "\n".join(steps)
        notes = rng.choice(_PLAIN_NOTES)
    return {
        "title": rng.choice(topic["titles"]),
        "description": description,
        "notes": notes,
        "labels": label_set,
    }


def compose_informed(sensor: SensorType, rng: random.Random) -> dict:
    topic = TOPICS[sensor]
    label_set = list(rng.choice(topic["labels"]))
    hypothesis = _fill(rng.choice(_HYPOTHESES), topic, rng)
    steps = [
        _fill(line, topic, rng)
        for line in rng.sample(_STEP_LINES, rng.randrange(3, 5))
    ]
    numbered = "\n".join(f"{n}. {line}" for n, line in enumerate(steps, start=1))
    interpretation = _fill(rng.choice(_INTERPRETATIONS), topic, rng)
    return {
        "title": rng.choice(topic["titles"]),
        "description": hypothesis + "\n" + numbered,
        "notes": interpretation,
        "labels": label_set,
    }


COMPOSERS = {
    "null": compose_null,
    "naive": compose_naive,
    "emerging": compose_emerging,
    "informed": compose_informed,
}

COMMENT_BODIES = [
    "Cool inquiry!",
    "We got different numbers in our class.",
    "Nice photos.",
    "Can you try it with the other sensor?",
    "We should replicate this one.",
    "Interesting result.",
    "Our group saw the same thing.",
]
