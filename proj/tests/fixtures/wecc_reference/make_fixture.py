"""Regenerates energy.csv, fleet.csv and population.csv.

Region totals are chosen so the electrification rates and fuel-mix values
published for the Western Interconnection come out exactly; they are then
spread over the member states with fixed shares. Texas rows sit outside the
region and must never leak into regional metrics.
"""
from pathlib import Path

HERE = Path(__file__).resolve().parent

SCENARIOS = ["nz_climate", "nz_ccs_climate", "nz_ira_ccs_climate"]

# Share of every non-Wyoming quantity, before normalisation.
STATE_WEIGHTS = {
    "CA": 0.45, "WA": 0.10, "OR": 0.06, "AZ": 0.10, "CO": 0.09,
    "NV": 0.05, "UT": 0.05, "ID": 0.03, "MT": 0.02, "NM": 0.03,
}
WY_SHARE = 0.015

POPULATION = {
    "CA": 39_000_000, "WA": 7_800_000, "OR": 4_300_000, "AZ": 7_400_000,
    "CO": 5_900_000, "NV": 3_200_000, "UT": 3_400_000, "ID": 1_900_000,
    "MT": 1_100_000, "NM": 2_100_000, "WY": 600_000, "TX": 30_000_000,
}

ROAD_SPLIT = {"ldv": 0.60, "mdv": 0.15, "hdv": 0.25}
FLEET_SPLIT = {"ldv": 0.90, "mdv": 0.07, "hdv": 0.03}
NONROAD_REFINED_SPLIT = {"rail": 0.2, "aviation": 0.6, "ship": 0.2}

# Region totals per (scenario, year):
#   R   road energy, all fuels        Er  road electricity   Hr road hydrogen
#   En  rail electricity              Nl  non-road refined liquids
#   F   road fleet                    ev  EV fleet share
#   wy  Wyoming electricity, all classes (None = plain share)
BASE_2020 = dict(R=5.0, Er=0.004, Hr=0.0, En=0.002, Nl=0.80, F=40_000_000, ev=0.0023, wy=None)
NO_IRA_2025 = dict(R=5.0, Er=0.098, Hr=0.006, En=0.004, Nl=0.80, F=40_000_000, ev=0.0286, wy=None)
NO_IRA_2030 = dict(R=4.2, Er=0.252, Hr=0.037, En=0.008, Nl=0.789, F=41_000_000, ev=0.11, wy=None)
NO_IRA_2035 = dict(R=4.0, Er=0.48, Hr=0.06, En=0.01, Nl=0.78, F=42_000_000, ev=0.32, wy=0.006)

TOTALS = {
    ("nz_climate", 2020): BASE_2020,
    ("nz_ccs_climate", 2020): BASE_2020,
    ("nz_ira_ccs_climate", 2020): BASE_2020,
    ("nz_climate", 2025): NO_IRA_2025,
    ("nz_ccs_climate", 2025): NO_IRA_2025,
    ("nz_ira_ccs_climate", 2025): dict(R=5.0, Er=0.245, Hr=0.01, En=0.004, Nl=0.80, F=40_000_000,
                                       ev=0.075, wy=None),
    ("nz_climate", 2030): NO_IRA_2030,
    ("nz_ccs_climate", 2030): NO_IRA_2030,
    ("nz_ira_ccs_climate", 2030): dict(R=4.196, Er=0.392, Hr=0.063, En=0.008, Nl=0.789,
                                       F=41_000_000, ev=0.20, wy=None),
    ("nz_climate", 2035): NO_IRA_2035,
    ("nz_ccs_climate", 2035): NO_IRA_2035,
    ("nz_ira_ccs_climate", 2035): dict(R=4.0, Er=0.80, Hr=0.09, En=0.01, Nl=0.78, F=42_000_000,
                                       ev=0.40, wy=0.009),
    ("nz_climate", 2050): dict(R=2.35, Er=1.23, Hr=0.12, En=0.04, Nl=0.5, F=44_000_000, ev=0.70,
                               wy=0.015),
    ("nz_ccs_climate", 2050): dict(R=3.25, Er=0.90, Hr=0.15, En=0.04, Nl=0.5, F=44_000_000, ev=0.58,
                                   wy=0.009),
    ("nz_ira_ccs_climate", 2050): dict(R=3.25, Er=0.92, Hr=0.15, En=0.04, Nl=0.5, F=44_000_000,
                                       ev=0.59, wy=0.009),
}


def state_shares():
    scale = (1.0 - WY_SHARE) / sum(STATE_WEIGHTS.values())
    shares = {s: w * scale for s, w in STATE_WEIGHTS.items()}
    shares["WY"] = WY_SHARE
    return shares


def fmt(x):
    return repr(round(x, 15))


def main():
    shares = state_shares()
    energy = ["scenario,year,state,vclass,fuel,energy_EJ"]
    fleet = ["scenario,year,state,vclass,powertrain,count"]
    for (scenario, year), t in TOTALS.items():
        elec_total = t["Er"] + t["En"]
        for state, share in shares.items():
            # Wyoming electricity is pinned; the other states absorb the rest.
            if t["wy"] is None:
                elec_share = share
            elif state == "WY":
                elec_share = t["wy"] / elec_total
            else:
                elec_share = share * (1.0 - t["wy"] / elec_total) / (1.0 - WY_SHARE)
            road_refined = t["R"] - t["Er"] - t["Hr"]
            for vclass, split in ROAD_SPLIT.items():
                energy.append(f"{scenario},{year},{state},{vclass},electricity,{fmt(t['Er'] * split * elec_share)}")
                energy.append(f"{scenario},{year},{state},{vclass},refined_liquids,{fmt(road_refined * split * share)}")
                energy.append(f"{scenario},{year},{state},{vclass},hydrogen,{fmt(t['Hr'] * split * share)}")
            energy.append(f"{scenario},{year},{state},rail,electricity,{fmt(t['En'] * elec_share)}")
            for vclass, split in NONROAD_REFINED_SPLIT.items():
                energy.append(f"{scenario},{year},{state},{vclass},refined_liquids,{fmt(t['Nl'] * split * share)}")
            for vclass, split in FLEET_SPLIT.items():
                count = t["F"] * split * share
                fleet.append(f"{scenario},{year},{state},{vclass},ev,{fmt(count * t['ev'])}")
                fleet.append(f"{scenario},{year},{state},{vclass},non_ev,{fmt(count * (1.0 - t['ev']))}")
        # Outside the region, deliberately large and fully electric.
        energy.append(f"{scenario},{year},TX,ldv,electricity,3.0")
        energy.append(f"{scenario},{year},TX,hdv,refined_liquids,1.0")
        fleet.append(f"{scenario},{year},TX,ldv,ev,20000000")
        fleet.append(f"{scenario},{year},TX,ldv,non_ev,1")

    population = ["state,year,persons"]
    for year in sorted({y for _, y in TOTALS}):
        for state, persons in POPULATION.items():
            population.append(f"{state},{year},{persons}")

    (HERE / "energy.csv").write_text("\n".join(energy) + "\n")
    (HERE / "fleet.csv").write_text("\n".join(fleet) + "\n")
    (HERE / "population.csv").write_text("\n".join(population) + "\n")


if __name__ == "__main__":
    main()
