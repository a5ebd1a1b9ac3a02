#!/usr/bin/env python3
"""Regenerate data/fixture_housing.csv, the 200-row synthetic test fixture.

The fixture mimics the canonical schema and rough feature ranges: a handful of
heavy-tailed columns, bounded geography, a nonlinear target with noise, and a
recording cap at 5.00001. It is NOT a sample of the real dataset; it exists so
the whole pipeline can run in CI in under a second.
"""
import numpy as np

N = 200
rng = np.random.default_rng(20240915)

med_inc = np.round(rng.lognormal(mean=1.25, sigma=0.45, size=N), 4)
house_age = np.round(rng.uniform(1, 52, size=N), 1)
ave_rooms = np.round(np.clip(rng.lognormal(1.65, 0.28, size=N), 0.9, None), 4)
ave_bedrms = np.round(ave_rooms * np.clip(rng.normal(0.21, 0.03, size=N), 0.08, 0.5), 4)
population = np.round(np.clip(rng.lognormal(7.0, 0.8, size=N), 3, None), 0)
ave_occup = np.round(np.clip(rng.lognormal(1.05, 0.3, size=N), 0.7, None), 4)
latitude = np.round(rng.uniform(32.5, 42.0, size=N), 2)
longitude = np.round(rng.uniform(-124.3, -114.3, size=N), 2)

# a few extreme outliers in the robust-scaled columns
population[rng.choice(N, 3, replace=False)] = [21500, 15800, 30100]
ave_rooms[rng.choice(N, 2, replace=False)] = [38.2, 55.7]
ave_occup[rng.choice(N, 2, replace=False)] = [41.0, 112.5]

coastal = np.abs(latitude - 34.05)
income_per_room = med_inc / (ave_rooms + 1)
signal = (
    0.55 * med_inc
    + 2.6 * income_per_room
    - 0.12 * coastal
    + 0.35 * np.sin(latitude) * np.cos(longitude / 3)
    + 0.015 * house_age * np.tanh(med_inc - 3)
    + 0.18 * ave_rooms / (ave_occup + 1)
)
y = signal + rng.normal(0, 0.35, size=N)
y = np.clip(np.round(0.58 * y + 0.1, 5), 0.15, 5.00001)

cols = dict(
    MedInc=med_inc, HouseAge=house_age, AveRooms=ave_rooms, AveBedrms=ave_bedrms,
    Population=population, AveOccup=ave_occup, Latitude=latitude, Longitude=longitude,
    MedHouseVal=y,
)

rows = list(zip(*cols.values()))
assert len(set(rows)) == N, "fixture must not contain duplicate rows"

with open("data/fixture_housing.csv", "w") as f:
    f.write(",".join(cols.keys()) + "\n")
    for row in rows:
        f.write(",".join(repr(float(v)) for v in row) + "\n")
print(f"wrote data/fixture_housing.csv ({N} rows)")
