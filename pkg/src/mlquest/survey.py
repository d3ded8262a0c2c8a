"""Likert questionnaire analytics: item stats, factor scores, correlations.

The instrument is 8 scale items across four factors (ease of use,
usefulness, intention, comparison) plus three demographic questions.
Datasets arrive as comma-separated text with a header of variable codes;
multi-select cells hold semicolon-separated option tokens.
"""

from __future__ import annotations

import csv
import io
import statistics
from dataclasses import dataclass

from .model import MLQuestError, ParseError


class UnknownCode(MLQuestError):
    pass


class MissingResponses(MLQuestError):
    pass


class ConstantVector(MLQuestError):
    """Correlation is undefined when a vector has zero variance."""


class LengthMismatch(MLQuestError):
    pass


@dataclass(frozen=True)
class LikertItem:
    code: str
    text: str
    factor: str


@dataclass(frozen=True)
class DemographicQuestion:
    code: str
    text: str
    kind: str  # "single_select" | "multi_select"
    options: tuple[str, ...]


@dataclass(frozen=True)
class SurveyInstrument:
    items: tuple[LikertItem, ...]
    demographics: tuple[DemographicQuestion, ...]

    def __post_init__(self) -> None:
        codes = [i.code for i in self.items] + [d.code for d in self.demographics]
        if len(set(codes)) != len(codes):
            raise ValueError("variable codes must be unique")

    def item(self, code: str) -> LikertItem:
        for item in self.items:
            if item.code == code:
                return item
        raise UnknownCode(code)

    def factor_items(self, factor: str) -> list[LikertItem]:
        return [i for i in self.items if i.factor == factor]

    @property
    def factors(self) -> list[str]:
        seen: list[str] = []
        for item in self.items:
            if item.factor not in seen:
                seen.append(item.factor)
        return seen


DEFAULT_INSTRUMENT = SurveyInstrument(
    items=(
        LikertItem("EU1", "Learning to play the game was easy for me.", "EU"),
        LikertItem("EU2", "I found the game controls clear and understandable.", "EU"),
        LikertItem("U1", "The game helped me understand the ideas behind the levels.", "U"),
        LikertItem("U2", "Playing the game made the concepts easier to remember.", "U"),
        LikertItem("U3", "The end-of-level summaries supported my learning.", "U"),
        LikertItem("I1", "I would play further levels like these.", "I"),
        LikertItem("I2", "I would recommend the game to other students.", "I"),
        LikertItem("C1", "I prefer learning this way over a lecture on the same topic.", "C"),
    ),
    demographics=(
        DemographicQuestion("prior_ml", "Knew of machine learning beforehand", "single_select", ("Yes", "No")),
        DemographicQuestion("inquisitive", "Curious about how machines learn", "single_select", ("Yes", "No")),
        DemographicQuestion(
            "platform", "Device(s) used to play", "multi_select", ("Laptop/Desktop", "Smartphone")
        ),
    ),
)

# Correlation table order; the single-item comparison factor is excluded
# by default since it cannot form a scale.
MATRIX_FACTORS = ("U", "EU", "I")


@dataclass(frozen=True)
class SurveyDataset:
    instrument: SurveyInstrument
    likert: tuple[dict, ...]  # per participant: code -> int in [1, 5]
    demographics: tuple[dict, ...]  # per participant: code -> tuple of option tokens

    @property
    def size(self) -> int:
        return len(self.likert)


def load_dataset(text: str, instrument: SurveyInstrument = DEFAULT_INSTRUMENT) -> SurveyDataset:
    reader = csv.reader(io.StringIO(text))
    rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    if not rows:
        raise ParseError("survey file is empty")
    header = [cell.strip() for cell in rows[0]]
    item_codes = {i.code for i in instrument.items}
    demo_by_code = {d.code: d for d in instrument.demographics}
    for code in header:
        if code not in item_codes and code not in demo_by_code:
            raise ParseError(f"unknown survey column {code!r}")
    if len(set(header)) != len(header):
        raise ParseError("duplicate survey columns")

    likert: list[dict] = []
    demographics: list[dict] = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != len(header):
            raise ParseError(f"row {lineno}: expected {len(header)} cells, got {len(row)}")
        answers: dict = {}
        demo: dict = {}
        for code, cell in zip(header, row):
            cell = cell.strip()
            if code in item_codes:
                if not cell:
                    continue  # missing answer; item_stats will refuse
                try:
                    value = int(cell)
                except ValueError:
                    raise ParseError(f"row {lineno}: {code} must be an integer, got {cell!r}") from None
                if not 1 <= value <= 5:
                    raise ParseError(f"row {lineno}: {code} must be in 1..5, got {value}")
                answers[code] = value
            else:
                question = demo_by_code[code]
                tokens = tuple(t.strip() for t in cell.split(";") if t.strip())
                if question.kind == "single_select" and len(tokens) > 1:
                    raise ParseError(f"row {lineno}: {code} allows one choice, got {len(tokens)}")
                for token in tokens:
                    if token not in question.options:
                        raise ParseError(f"row {lineno}: {code} has unknown option {token!r}")
                demo[code] = tokens
        likert.append(answers)
        demographics.append(demo)
    return SurveyDataset(instrument=instrument, likert=tuple(likert), demographics=tuple(demographics))


def _answers(dataset: SurveyDataset, code: str) -> list[int]:
    dataset.instrument.item(code)  # raises UnknownCode
    values = []
    for i, participant in enumerate(dataset.likert):
        if code not in participant:
            raise MissingResponses(f"participant {i + 1} did not answer {code}")
        values.append(participant[code])
    if not values:
        raise MissingResponses("dataset has no participants")
    return values


def item_stats(dataset: SurveyDataset, code: str, population: bool = False) -> tuple[float, float]:
    """(mean, standard deviation) for one item across all participants.

    The n-1 (sample) estimator is the default; pass population=True for
    the n denominator.
    """
    values = _answers(dataset, code)
    mean = statistics.fmean(values)
    if population:
        sd = statistics.pstdev(values)
    else:
        sd = statistics.stdev(values) if len(values) > 1 else 0.0
    return mean, sd


def factor_scores(dataset: SurveyDataset) -> list[dict[str, float]]:
    """Per participant, the unweighted mean of each factor's items."""
    per_item = {item.code: _answers(dataset, item.code) for item in dataset.instrument.items}
    scores = []
    for i in range(dataset.size):
        row = {}
        for factor in dataset.instrument.factors:
            codes = [item.code for item in dataset.instrument.factor_items(factor)]
            row[factor] = statistics.fmean(per_item[code][i] for code in codes)
        scores.append(row)
    return scores


def pearson(xs, ys) -> float:
    xs, ys = list(xs), list(ys)
    if len(xs) != len(ys):
        raise LengthMismatch(f"{len(xs)} vs {len(ys)} values")
    if len(xs) < 2:
        raise LengthMismatch("correlation needs at least 2 pairs")
    try:
        return statistics.correlation(xs, ys)
    except statistics.StatisticsError as exc:
        raise ConstantVector(str(exc)) from exc


def correlation_matrix(dataset: SurveyDataset, factors=MATRIX_FACTORS) -> list[list[float]]:
    """Square symmetric Pearson matrix over factor scores, unit diagonal."""
    scores = factor_scores(dataset)
    columns = {f: [row[f] for row in scores] for f in factors}
    size = len(factors)
    matrix = [[1.0] * size for _ in range(size)]
    for i in range(size):
        for j in range(i):
            value = pearson(columns[factors[i]], columns[factors[j]])
            matrix[i][j] = matrix[j][i] = value
    return matrix


def demographics(dataset: SurveyDataset) -> dict[str, list[tuple[str, int, float]]]:
    """Per question, (option, count, percent) rows in declared order.

    Single-select percentages are over participants who answered, so
    they sum to 100; multi-select percentages are over all participants
    and may sum past 100.
    """
    out: dict[str, list[tuple[str, int, float]]] = {}
    for question in dataset.instrument.demographics:
        rows = []
        answers = [p.get(question.code, ()) for p in dataset.demographics]
        if question.kind == "single_select":
            answered = sum(1 for tokens in answers if tokens)
            for option in question.options:
                count = sum(1 for tokens in answers if tokens and tokens[0] == option)
                percent = 100.0 * count / answered if answered else 0.0
                rows.append((option, count, percent))
        else:
            total = len(answers)
            for option in question.options:
                count = sum(1 for tokens in answers if option in tokens)
                percent = 100.0 * count / total if total else 0.0
                rows.append((option, count, percent))
        out[question.code] = rows
    return out


def report(dataset: SurveyDataset, population: bool = False) -> dict:
    """Machine-readable analysis: item table, demographic percentages,
    factor correlation matrix. Means/SD round to 2 decimals, percents to
    1, correlations to 4."""
    if dataset.size == 0:
        raise MissingResponses("dataset has no participants")
    items = []
    for item in dataset.instrument.items:
        mean, sd = item_stats(dataset, item.code, population=population)
        items.append(
            {
                "code": item.code,
                "factor": item.factor,
                "text": item.text,
                "mean": round(mean, 2),
                "sd": round(sd, 2),
            }
        )
    demo = []
    percentages = demographics(dataset)
    for question in dataset.instrument.demographics:
        demo.append(
            {
                "code": question.code,
                "text": question.text,
                "kind": question.kind,
                "options": [
                    {"option": option, "count": count, "percent": round(percent, 1)}
                    for option, count, percent in percentages[question.code]
                ],
            }
        )
    matrix = correlation_matrix(dataset)
    return {
        "participants": dataset.size,
        "sd_estimator": "population" if population else "sample",
        "items": items,
        "demographics": demo,
        "correlations": {
            "factors": list(MATRIX_FACTORS),
            "matrix": [[round(v, 4) for v in row] for row in matrix],
        },
    }


def format_report(data: dict) -> str:
    """Plain-text tables in the shape of the published ones."""
    lines = [f"Participants: {data['participants']}  (SD estimator: {data['sd_estimator']})", ""]
    lines.append("Item  Factor  Mean   SD")
    for item in data["items"]:
        lines.append(f"{item['code']:<5} {item['factor']:<6} {item['mean']:>5.2f} {item['sd']:>5.2f}")
    lines.append("")
    for question in data["demographics"]:
        suffix = " (multiple answers allowed)" if question["kind"] == "multi_select" else ""
        lines.append(f"{question['text']}{suffix}:")
        for row in question["options"]:
            lines.append(f"  {row['option']:<16} {row['count']:>3}  {row['percent']:>5.1f}%")
    lines.append("")
    factors = data["correlations"]["factors"]
    matrix = data["correlations"]["matrix"]
    lines.append("Factor correlations (lower triangle):")
    lines.append("      " + "".join(f"{f:>8}" for f in factors))
    for i, factor in enumerate(factors):
        cells = []
        for j in range(len(factors)):
            if j > i:
                cells.append(" " * 8)
            elif j == i:
                cells.append(f"{'1':>8}")
            else:
                cells.append(f"{matrix[i][j]:>8.4f}")
        lines.append(f"{factor:<6}" + "".join(cells))
    return "\n".join(lines) + "\n"
