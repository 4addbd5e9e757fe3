"""In-memory relational mini-database, query planning and answer scoring.

Templates compile to an internal QueryPlan (never SQL text); a debug
rendering of an SQL-like statement is available for inspection only.
Time words (morning, late-evening, ...) are resolved through an explicit
convention table so answer correctness never hinges on an implicit
definition.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ChronusError, DataFormatError
from .template import Template

SCHEMAS = {
    "flight": ("flight_id", "airline", "number", "from_city", "to_city",
               "depart_min", "arrive_min", "aircraft", "meal"),
    "fare": ("fare_id", "flight_id", "one_way_cost", "fare_class"),
    "city": ("city_code", "city_name"),
    "airport": ("airport_code", "city_code"),
}
INT_COLUMNS = {"number", "depart_min", "arrive_min", "one_way_cost"}
PRIMARY_KEYS = {"flight": "flight_id", "fare": "fare_id",
                "city": "city_code", "airport": "airport_code"}


class PlanError(ChronusError):
    """Template token with no compilation rule (translator-class error)."""


class Conventions:
    """Explicit data conventions: time-word intervals and defaults."""

    def __init__(self, time_ranges, default_subject="flight",
                 reject_threshold=0.75):
        self.time_ranges = dict(time_ranges)
        self.default_subject = default_subject
        self.reject_threshold = reject_threshold

    @classmethod
    def load(cls, path):
        time_ranges = {}
        default_subject = "flight"
        reject_threshold = 0.75
        section = None
        with open(path, encoding="utf-8") as fh:
            for ln, raw in enumerate(fh, 1):
                line = raw.rstrip("\n")
                if not line.strip() or line.lstrip().startswith("#"):
                    continue
                if line.startswith("["):
                    section = line[1:-1].strip()
                    continue
                parts = line.split("\t")
                if section == "time" and len(parts) == 3:
                    time_ranges[parts[0]] = (int(parts[1]), int(parts[2]))
                elif section == "defaults" and len(parts) == 2:
                    if parts[0] == "subject":
                        default_subject = parts[1]
                    elif parts[0] == "reject-threshold":
                        reject_threshold = float(parts[1])
                else:
                    raise DataFormatError("bad conventions line", path, ln)
        return cls(time_ranges, default_subject, reject_threshold)


class MiniDb:
    """Typed, referentially checked in-memory tables."""

    def __init__(self, tables, conventions: Conventions):
        self.tables = tables
        self.conventions = conventions
        self._validate()
        self._city_by_name = {r["city_name"]: r["city_code"]
                              for r in tables.get("city", [])}
        self._city_codes = {r["city_code"] for r in tables.get("city", [])}

    def _validate(self):
        for name, schema in SCHEMAS.items():
            for row in self.tables.get(name, []):
                if set(row) != set(schema):
                    raise DataFormatError(f"bad columns in table {name}: {sorted(row)}")
        flight_ids = {r["flight_id"] for r in self.tables.get("flight", [])}
        city_codes = {r["city_code"] for r in self.tables.get("city", [])}
        for r in self.tables.get("fare", []):
            if r["flight_id"] not in flight_ids:
                raise DataFormatError(f"fare {r['fare_id']} references unknown flight")
        for r in self.tables.get("airport", []):
            if r["city_code"] not in city_codes:
                raise DataFormatError(
                    f"airport {r['airport_code']} references unknown city")
        for r in self.tables.get("flight", []):
            for col in ("depart_min", "arrive_min"):
                if not 0 <= r[col] < 1440:
                    raise DataFormatError(
                        f"flight {r['flight_id']}: {col} out of [0,1440)")

    def resolve_city(self, value: str) -> str:
        """City code from a code or a (grammar-normalized) city name."""
        if value in self._city_codes:
            return value
        if value in self._city_by_name:
            return self._city_by_name[value]
        raise PlanError(f"unknown city {value!r}")

    @classmethod
    def load(cls, path, conventions: Conventions):
        tables = {name: [] for name in SCHEMAS}
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
        if not lines or lines[0].strip() != "chronus-db v1":
            raise DataFormatError("missing chronus-db v1 header", path, 1)
        table = None
        for ln, line in enumerate(lines[1:], 2):
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            if line.startswith("["):
                header = line[1:-1].strip()
                if not header.startswith("table "):
                    raise DataFormatError("expected [table <name>]", path, ln)
                table = header.split(None, 1)[1]
                if table not in SCHEMAS:
                    raise DataFormatError(f"unknown table {table!r}", path, ln)
                continue
            if table is None:
                raise DataFormatError("row before any [table] header", path, ln)
            schema = SCHEMAS[table]
            parts = line.split("\t")
            if len(parts) != len(schema):
                raise DataFormatError(
                    f"expected {len(schema)} columns in {table}", path, ln)
            row = {}
            for col, cell in zip(schema, parts):
                row[col] = int(cell) if col in INT_COLUMNS else cell
            tables[table].append(row)
        return cls(tables, conventions)


@dataclass
class QueryPlan:
    table: str
    join_fare: bool = False
    predicates: list = field(default_factory=list)  # (column, op, value)
    projection: tuple = ()
    aggregate: tuple | None = None                  # ("minimum"|"maximum", column)
    existence: bool = False

    def render_sql(self) -> str:
        """Debug-only SQL-like rendering; never executed anywhere."""
        cols = "COUNT(*)" if self.existence else ", ".join(self.projection)
        frm = "flight JOIN fare ON fare.flight_id = flight.flight_id" \
            if self.join_fare else self.table
        where = " AND ".join(f"{c} {op} {v!r}" for c, op, v in self.predicates)
        sql = f"SELECT {cols} FROM {frm}"
        if where:
            sql += f" WHERE {where}"
        if self.aggregate:
            op = "MIN" if self.aggregate[0] == "minimum" else "MAX"
            sql += f" HAVING {self.aggregate[1]} = {op}({self.aggregate[1]})"
        return sql + ";"


@dataclass
class Answer:
    kind: str                 # "rows" | "number" | "boolean"
    rows: list = field(default_factory=list)
    columns: tuple = ()
    value: object = None      # payload for number/boolean answers

    def __post_init__(self):
        if self.kind == "rows":
            if self.value is not None:
                raise ChronusError("rows answer must not carry a scalar")
        elif self.kind in ("number", "boolean"):
            if self.rows:
                raise ChronusError(f"{self.kind} answer must not carry rows")
        else:
            raise ChronusError(f"unknown answer kind {self.kind!r}")

    def canonical(self):
        """Set form used for min/max reference scoring."""
        if self.kind == "rows":
            return frozenset(tuple(sorted(str(v) for v in row))
                             for row in self.rows)
        return frozenset({str(self.value)})

    def render_lines(self):
        if self.kind == "rows":
            return ["\t".join(str(v) for v in row) for row in self.rows]
        if self.kind == "boolean":
            return ["YES" if self.value else "NO"]
        return [str(self.value)]


_PROJECTIONS = {
    "flight": ("airline", "number", "from_city", "to_city",
               "depart_min", "arrive_min"),
    "fare": ("airline", "number", "fare_class", "one_way_cost"),
    "meal": ("airline", "number", "meal"),
    "aircraft": ("airline", "number", "aircraft"),
}

# subject value -> (needs fare join, extra predicates, projection key)
_SUBJECTS = {
    "flight": (False, (), "flight"),
    "fare": (True, (), "fare"),
    "meal": (False, (), "meal"),
    "aircraft": (False, (), "aircraft"),
    "breakfast": (False, (("meal", "=", "BREAKFAST"),), "flight"),
    "lunch": (False, (("meal", "=", "LUNCH"),), "flight"),
    "dinner": (False, (("meal", "=", "DINNER"),), "flight"),
}


def plan_query(template: Template, db: MiniDb) -> QueryPlan:
    """Compile an accepted template into a deterministic query plan."""
    subject_token = template.get("subject")
    subject = subject_token.value if subject_token else db.conventions.default_subject
    if subject not in _SUBJECTS:
        raise PlanError(f"no table rule for subject {subject!r}")
    join_fare, extra_preds, proj_key = _SUBJECTS[subject]

    plan = QueryPlan(table="flight", join_fare=join_fare,
                     projection=_PROJECTIONS[proj_key])
    plan.predicates.extend(extra_preds)
    operator = None

    for token in template.tokens:
        kw, value = token.keyword, token.value
        if kw == "subject":
            continue
        if kw == "question":
            if value == "yes-no":
                plan.existence = True
            elif value != "display":
                raise PlanError(f"no rule for question value {value!r}")
        elif kw == "origin":
            plan.predicates.append(("from_city", "=", db.resolve_city(value)))
        elif kw == "destin":
            plan.predicates.append(("to_city", "=", db.resolve_city(value)))
        elif kw == "airline":
            plan.predicates.append(("airline", "=", value))
        elif kw == "aircraft":
            plan.predicates.append(("aircraft", "=", value))
        elif kw == "meal":
            plan.predicates.append(("meal", "=", value))
        elif kw == "fare":
            plan.join_fare = True
            plan.predicates.append(("fare_class", "=", value))
        elif kw == "depart-time":
            if value not in db.conventions.time_ranges:
                raise PlanError(f"no time convention for {value!r}")
            lo, hi = db.conventions.time_ranges[value]
            plan.predicates.append(("depart_min", ">=", lo))
            plan.predicates.append(("depart_min", "<", hi))
        elif kw == "operator":
            if value not in ("minimum", "maximum"):
                raise PlanError(f"no rule for operator value {value!r}")
            operator = value
        else:
            raise PlanError(f"no compilation rule for keyword {kw!r}")

    if operator is not None:
        column = "one_way_cost" if plan.join_fare else "depart_min"
        plan.aggregate = (operator, column)
    if plan.join_fare and proj_key == "flight":
        plan.projection = _PROJECTIONS["fare"]
    return plan


def execute(plan: QueryPlan, db: MiniDb) -> Answer:
    """Deterministic evaluation; rows sorted by primary key, ties kept."""
    if plan.join_fare:
        rows = []
        for fare in db.tables["fare"]:
            for flight in db.tables["flight"]:
                if flight["flight_id"] == fare["flight_id"]:
                    rows.append({**flight, **fare})
        rows.sort(key=lambda r: (r["flight_id"], r["fare_id"]))
    else:
        rows = sorted(db.tables[plan.table],
                      key=lambda r: r[PRIMARY_KEYS[plan.table]])

    for column, op, value in plan.predicates:
        if op == "=":
            rows = [r for r in rows if r[column] == value]
        elif op == ">=":
            rows = [r for r in rows if r[column] >= value]
        elif op == "<":
            rows = [r for r in rows if r[column] < value]
        else:
            raise PlanError(f"unknown comparator {op!r}")

    if plan.existence:
        return Answer(kind="boolean", value=bool(rows))
    if plan.aggregate is not None:
        op, column = plan.aggregate
        if rows:
            extremum = (min if op == "minimum" else max)(r[column] for r in rows)
            rows = [r for r in rows if r[column] == extremum]
    projected = [tuple(r[c] for c in plan.projection) for r in rows]
    return Answer(kind="rows", rows=projected, columns=plan.projection)


def score_answer(answer: Answer, minimal: Answer, maximal: Answer) -> str:
    """'correct' iff minimal <= answer <= maximal under set semantics."""
    if not (answer.kind == minimal.kind == maximal.kind):
        return "incorrect"
    got = answer.canonical()
    lo = minimal.canonical()
    hi = maximal.canonical()
    return "correct" if lo <= got <= hi else "incorrect"
