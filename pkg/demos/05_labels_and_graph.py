"""
Labeling topics and relating categories
=======================================

Shows the seed-word machinery on hand-built topic summaries: majority
labeling over top words, attachment of unlabeled topics by category
mass, and the cross-category edges that fall out of the attached
topics' vocabularies.
"""

from negtopics.labeling import (
    SeedLexicon,
    attach_subtopics,
    build_relationship_graph,
    label_topic,
    TopicSummary,
)

seeds = SeedLexicon({
    "Diabetes": ["diabet*"],
    "Diet": ["diet*"],
    "Exercise": ["exercis*", "workout*", "fitness*"],
    "Obesity": ["obes*", "overweight"],
})

# A stem hits at the start of a word or right after a non-letter, so
# "type2diabetes" counts for Diabetes but "prediabetes" does not.
for window in (
    ["diet", "dieting", "diets", "carbs", "sugar"],
    ["type2diabetes", "insulin", "diabetic", "diabetes", "cgm"],
    ["cancer", "smoking", "risk"],
):
    label, hits = label_topic([(w, 0.0) for w in window], seeds)
    print(f"{window} -> label={label} hits={hits}")

def summary(topic, words, label, mass):
    return TopicSummary(
        topic=topic,
        top_words=[(w, 0.1) for w in words],
        label=label,
        seed_hits={},
        category_mass=mass,
    )

# Topic 0 carries a majority label. Topics 1 and 2 do not: topic 1
# leans on Obesity documents strongly enough to attach there, topic 2
# spreads too thin and lands in the non-health bucket.
summaries = [
    summary(0, ["diet", "dieting", "carbs"], "Diet",
            {"Diet": 0.8, "Obesity": 0.1, "Diabetes": 0.1, "Exercise": 0.0}),
    summary(1, ["surgery", "bmi", "diabetes"], None,
            {"Obesity": 0.7, "Diet": 0.1, "Diabetes": 0.2, "Exercise": 0.0}),
    summary(2, ["weather", "traffic", "news"], None,
            {"Obesity": 0.3, "Diet": 0.3, "Diabetes": 0.2, "Exercise": 0.2}),
]
attach_subtopics(summaries, seeds, tau=0.5)
for s in summaries:
    a = s.attachment
    print(f"topic {s.topic}: kind={a.kind} category={a.category} name={a.name}")

# Topic 1 sits under Obesity but mentions "diabetes", which yields a
# witnessed edge between the two categories.
graph = build_relationship_graph(summaries, seeds)
for e in graph.edges:
    print(f"edge {e.source} -> {e.target} weight={e.weight} witnesses={e.witnesses}")
