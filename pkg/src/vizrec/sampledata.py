"""Deterministic sample tables shaped like the bundled demo scenarios.

Two synthetic tables mirror familiar exploration datasets: four years of
daily weather for two cities (2,922 rows; one temporal, two nominal, four
quantitative variables) and a registry of graduate programs across cities
and fields (4,993 rows; the YEAR column reads as quantitative until
overridden to temporal). Generation is seeded, so every call yields
byte-identical CSV.
"""

from __future__ import annotations

import io
import random
from datetime import date, timedelta

from .dataset import Dataset, load_csv

WEATHER_CITIES = ("New York", "Seattle")
WEATHER_KINDS = ("drizzle", "fog", "rain", "snow", "sun")

GRAD_CITIES = (
    "Rio de Janeiro", "Niteroi", "Petropolis", "Campos", "Volta Redonda",
    "Nova Friburgo", "Duque de Caxias", "Seropedica", "Vassouras", "Macae",
)
GRAD_STATUSES = ("Federal", "State", "Municipal", "Private")
GRAD_FIELDS = (
    "Engineering", "Health Sciences", "Humanities", "Exact Sciences",
    "Biological Sciences", "Applied Social Sciences", "Agrarian Sciences",
    "Linguistics and Arts",
)


def weather_csv() -> str:
    """Daily weather for two cities, 2012 through 2015 (2,922 rows)."""
    rng = random.Random(20120101)
    out = io.StringIO()
    out.write("DATE,LOCATION,WEATHER,WIND,PRECIPITATION,TEMP_MAX,TEMP_MIN\n")
    day = date(2012, 1, 1)
    end = date(2015, 12, 31)
    while day <= end:
        for city in WEATHER_CITIES:
            kind = rng.choice(WEATHER_KINDS)
            wind = rng.uniform(0.4, 9.5)
            precipitation = 0.0 if kind == "sun" else rng.uniform(0.0, 35.0)
            base = 12.0 if city == "Seattle" else 14.0
            seasonal = 10.0 * _season(day)
            temp_max = base + seasonal + rng.uniform(0.0, 6.0)
            temp_min = temp_max - rng.uniform(3.0, 10.0)
            out.write(
                f"{day.isoformat()},{city},{kind},{wind:.1f},"
                f"{precipitation:.1f},{temp_max:.1f},{temp_min:.1f}\n"
            )
        day += timedelta(days=1)
    return out.getvalue()


def _season(day: date) -> float:
    # Crude northern-hemisphere seasonality in [-1, 1].
    offset = (day.timetuple().tm_yday - 196) / 365.0
    return 1.0 - 4.0 * abs(offset if abs(offset) <= 0.5 else 1.0 - abs(offset))


def graduate_csv() -> str:
    """Graduate-program records across cities and fields (4,993 rows)."""
    rng = random.Random(1991)
    out = io.StringIO()
    out.write("YEAR,CITY,JURIDICAL STATUS,FIELD,QNT MASTERS,QNT DOCTORAL,QNT POSTDOCTORAL\n")
    for _ in range(4993):
        year = rng.randint(1991, 2016)
        city = rng.choice(GRAD_CITIES)
        status = rng.choice(GRAD_STATUSES)
        area = rng.choice(GRAD_FIELDS)
        masters = rng.randint(0, 120)
        doctoral = rng.randint(0, max(4, masters // 2))
        postdoc = rng.randint(0, max(25, doctoral // 2))
        out.write(f"{year},{city},{status},{area},{masters},{doctoral},{postdoc}\n")
    return out.getvalue()


def iris_csv() -> str:
    """A small iris-style table: four measures and a species column."""
    rows = [
        (5.1, 3.5, 1.4, 0.2, "setosa"),
        (4.9, 3.0, 1.4, 0.2, "setosa"),
        (4.7, 3.2, 1.3, 0.2, "setosa"),
        (5.0, 3.6, 1.4, 0.3, "setosa"),
        (7.0, 3.2, 4.7, 1.4, "versicolor"),
        (6.4, 3.2, 4.5, 1.5, "versicolor"),
        (6.9, 3.1, 4.9, 1.5, "versicolor"),
        (5.5, 2.3, 4.0, 1.3, "versicolor"),
        (6.3, 3.3, 6.0, 2.5, "virginica"),
        (5.8, 2.7, 5.1, 1.9, "virginica"),
        (7.1, 3.0, 5.9, 2.1, "virginica"),
        (6.5, 3.0, 5.8, 2.2, "virginica"),
    ]
    out = ["sepal_length,sepal_width,petal_length,petal_width,species"]
    out.extend(",".join(str(v) for v in row) for row in rows)
    return "\n".join(out) + "\n"


def weather_dataset() -> Dataset:
    return load_csv(weather_csv(), name="weather")


def graduate_dataset() -> Dataset:
    return load_csv(graduate_csv(), name="graduate")


def iris_dataset() -> Dataset:
    return load_csv(iris_csv(), name="iris")


__all__ = [
    "GRAD_CITIES",
    "GRAD_FIELDS",
    "GRAD_STATUSES",
    "WEATHER_CITIES",
    "WEATHER_KINDS",
    "graduate_csv",
    "graduate_dataset",
    "iris_csv",
    "iris_dataset",
    "weather_csv",
    "weather_dataset",
]
