"""Walk through CSV ingestion and variable typing.

Loads the bundled weather-style table, shows the inferred type and display
color of every column, then overrides a type the way a user would in the
variables panel.

Run: python demos/01_type_inference.py
"""

from vizrec import VarType, column_stats, override_type
from vizrec.sampledata import graduate_dataset, weather_dataset


def show(dataset):
    print(f"\n{dataset.name}: {dataset.row_count} rows")
    for v in dataset.variables:
        stats = column_stats(dataset, v.name)
        extra = ""
        if stats.minimum is not None:
            extra = f"  range [{stats.minimum}, {stats.maximum}]"
        elif stats.categories is not None:
            head = ", ".join(stats.categories[:4])
            extra = f"  categories: {head}{'...' if stats.distinct > 4 else ''}"
        print(
            f"  {v.name:<20} {v.effective_type.value:<13} "
            f"({v.display_color}){extra}"
        )


weather = weather_dataset()
show(weather)

graduate = graduate_dataset()
show(graduate)

# YEAR holds integers, so it reads as a measure. One click in the variables
# panel (or one call here) makes it temporal, which switches every rule that
# touches it: trends, time units, filters.
print("\nOverriding YEAR to temporal...")
graduate = override_type(graduate, "YEAR", VarType.TEMPORAL)
year = graduate.variable("YEAR")
print(f"  inferred={year.inferred_type.value}  effective={year.effective_type.value}")
show(graduate)
