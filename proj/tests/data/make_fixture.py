#!/usr/bin/env python3
"""Regenerates fixture_200.csv: 6 themes x 3 sub-themes of synthetic abstracts."""
import csv
import datetime
import random

THEMES = {
    ("covid", "pandemic", "coronavirus", "outbreak", "transmission", "virus"): [
        ["social", "measure", "intervention", "distancing", "lockdown", "restriction", "compliance", "mobility"],
        ["vaccine", "vaccination", "dose", "efficacy", "antibody", "immunity", "hesitancy", "booster"],
        ["testing", "diagnostic", "swab", "sensitivity", "antigen", "screening", "laboratory", "specimen"],
    ],
    ("mental", "wellbeing", "psychological", "distress", "stress", "coping"): [
        ["anxiety", "depression", "questionnaire", "prevalence", "survey", "symptom", "score", "scale"],
        ["sleep", "insomnia", "circadian", "quality", "night", "fatigue", "rhythm", "rest"],
        ["loneliness", "isolation", "elderly", "contact", "friend", "support", "household", "older"],
    ],
    ("education", "learning", "teaching", "student", "curriculum", "classroom"): [
        ["online", "platform", "video", "remote", "digital", "internet", "engagement", "virtual"],
        ["university", "exam", "assessment", "grading", "cheating", "degree", "lecturer", "semester"],
        ["closure", "school", "pupil", "attendance", "reopening", "teacher", "parent", "kindergarten"],
    ],
    ("economic", "economy", "financial", "market", "sector", "income"): [
        ["unemployment", "job", "labour", "wage", "furlough", "worker", "employment", "layoff"],
        ["supply", "chain", "shortage", "logistics", "shipping", "inventory", "manufacturing", "port"],
        ["stock", "volatility", "investor", "index", "return", "price", "crash", "trading"],
    ],
    ("clinical", "hospital", "patient", "admission", "care", "treatment"): [
        ["ventilation", "intensive", "oxygen", "respiratory", "failure", "icu", "intubation", "bed"],
        ["mortality", "comorbidity", "diabetes", "obesity", "hypertension", "death", "survival", "cohort"],
        ["telemedicine", "consultation", "teleconsultation", "appointment", "telehealth", "clinician", "visit", "phone"],
    ],
    ("genome", "molecular", "protein", "cellular", "receptor", "biology"): [
        ["sequencing", "variant", "mutation", "lineage", "phylogenetic", "strain", "genomic", "spike"],
        ["structure", "binding", "crystal", "docking", "domain", "conformation", "ligand", "residue"],
        ["repurposing", "compound", "inhibitor", "candidate", "antiviral", "screen", "molecule", "chloroquine"],
    ],
}

BACKGROUND = ["research", "evidence", "significant", "impact", "health", "factor", "analysis",
              "population", "public", "naïve", "café", "trend", "global", "national", "effect"]
FILLER = ["the", "of", "and", "in", "we", "this", "a", "to", "with", "for", "is", "was", "our"]
SUB_WEIGHTS = [10, 8, 7, 6, 4, 3, 3, 2]


def main():
    rng = random.Random(20200311)
    subthemes = [(theme, subs[i]) for theme, subs in THEMES.items() for i in range(3)]
    start = datetime.date(2019, 12, 1)
    rows = []
    for n in range(200):
        theme, sub = subthemes[n % len(subthemes)]
        words = []
        for _ in range(rng.randint(45, 70)):
            u = rng.random()
            if u < 0.45:
                words.append(rng.choices(sub, weights=SUB_WEIGHTS)[0])
            elif u < 0.7:
                words.append(rng.choice(theme))
            elif u < 0.8:
                words.append(rng.choice(BACKGROUND))
            else:
                words.append(rng.choice(FILLER))
        abstract = " ".join(words).capitalize() + "."
        title = " ".join(w.capitalize() for w in rng.sample(sub, 3)) + " in the " + theme[0] + " context"
        day = start + datetime.timedelta(days=rng.randint(0, 760))
        if n % 25 == 7:
            date = ""
        elif n % 31 == 11:
            date = "2020"
        elif n in (50, 150):
            date = "spring 2020"
        elif n % 5 == 0:
            date = day.strftime("%d/%m/%Y")
        else:
            date = day.isoformat()
        rows.append({"id": f"doc-{n + 1:03d}", "title": title, "abstract": abstract, "date": date})
    with open("fixture_200.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=["id", "title", "abstract", "date"])
        writer.writeheader()
        writer.writerows(rows)


if __name__ == "__main__":
    main()
