from __future__ import annotations

import random

import pytest

from vizrec.dataset import Dataset, load_csv
from vizrec.sampledata import graduate_dataset, iris_dataset, weather_dataset


@pytest.fixture(scope="session")
def weather() -> Dataset:
    return weather_dataset()


@pytest.fixture(scope="session")
def graduate() -> Dataset:
    return graduate_dataset()


@pytest.fixture(scope="session")
def iris() -> Dataset:
    return iris_dataset()


@pytest.fixture
def tiny_cities() -> Dataset:
    csv = (
        "CITY,TEMP\n"
        "Lisbon,17.5\nLisbon,18.0\nPorto,15.2\nPorto,14.8\nPorto,16.0\n"
        "Faro,21.1\nFaro,22.3\nLisbon,19.2\nFaro,20.0\nPorto,15.5\n"
    )
    return load_csv(csv, name="cities")


def random_dataset(rng: random.Random, max_rows: int = 200) -> Dataset:
    """A small random table with one column of each variable type and
    occasional missing cells."""
    n = rng.randint(5, max_rows)
    lines = ["num,cat,level,stamp"]
    categories = ["alpha", "beta", "gamma", "delta"][: rng.randint(2, 4)]
    levels = list(range(1, rng.randint(3, 6)))
    for i in range(n):
        present = i == 0  # keep the first row complete so types are stable
        num = "" if not present and rng.random() < 0.05 else f"{rng.uniform(-40, 90):.2f}"
        cat = "" if not present and rng.random() < 0.05 else rng.choice(categories)
        level = "" if not present and rng.random() < 0.05 else str(rng.choice(levels))
        year = rng.randint(2010, 2014)
        month = rng.randint(1, 12)
        day = rng.randint(1, 28)
        stamp = "" if not present and rng.random() < 0.05 else f"{year:04d}-{month:02d}-{day:02d}"
        lines.append(f"{num},{cat},{level},{stamp}")
    return load_csv("\n".join(lines) + "\n", name="random")
