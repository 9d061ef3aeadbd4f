#!/usr/bin/env python3
"""Regenerate the bundled catalog assets under src/chartforge/catalogs/.

The catalogs are static package data; this script is the single source of
truth for them. Run it after editing the tables below, then commit the
regenerated TSVs. Output is deterministic: no RNG, no timestamps.

themes.tsv   (topic, theme_phrase)        one row per theme
lexicon.tsv  (topic, noun)                one row per noun
trends.tsv   (trend_id, family, types, params_json)
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

OUT_DIR = Path(__file__).resolve().parent.parent / "src" / "chartforge" / "catalogs"

# Domain -> (groupings, shared nouns, {topic: (measures, topic nouns)}).
# Theme phrases are measure x grouping, so each topic yields
# len(measures) * len(groupings) themes. Phrases must not contain digits.
DOMAINS: dict[str, dict] = {
    "entertainment": {
        "groupings": ["by genre", "across major markets", "over recent seasons"],
        "nouns": ["audience", "release", "review", "rating", "premiere", "season", "franchise"],
        "topics": {
            "cinema": (
                ["box office revenue", "ticket sales", "screen counts", "audience ratings"],
                ["film", "director", "studio", "trailer", "sequel"],
            ),
            "streaming television": (
                ["subscriber growth", "viewing hours", "catalog size", "churn rates"],
                ["series", "episode", "platform", "binge", "pilot"],
            ),
            "video gaming": (
                ["unit sales", "player counts", "playtime totals", "review scores"],
                ["console", "studio", "level", "expansion", "tournament"],
            ),
            "music industry": (
                ["album sales", "streaming counts", "concert attendance", "chart placements"],
                ["album", "single", "tour", "label", "playlist"],
            ),
            "board games": (
                ["copies sold", "player ratings", "session lengths", "crowdfunding totals"],
                ["publisher", "expansion", "dice", "card", "meeple"],
            ),
            "podcasting": (
                ["listener counts", "download totals", "episode lengths", "sponsorship revenue"],
                ["host", "episode", "feed", "interview", "network"],
            ),
            "theater": (
                ["seat occupancy", "production budgets", "show counts", "donation totals"],
                ["stage", "playwright", "rehearsal", "ensemble", "matinee"],
            ),
            "comics publishing": (
                ["issue sales", "subscription counts", "convention attendance", "reprint volumes"],
                ["artist", "panel", "imprint", "anthology", "serial"],
            ),
            "theme parks": (
                ["visitor counts", "ride throughput", "wait times", "merchandise revenue"],
                ["attraction", "coaster", "mascot", "pass", "parade"],
            ),
        },
    },
    "technology": {
        "groupings": ["by product line", "across regions", "over successive quarters"],
        "nouns": ["device", "platform", "vendor", "upgrade", "launch", "patch", "benchmark"],
        "topics": {
            "smartphones": (
                ["handset shipments", "screen repair costs", "battery endurance scores", "camera benchmark results"],
                ["handset", "charger", "carrier", "flagship", "accessory"],
            ),
            "cloud computing": (
                ["compute spending", "storage volumes", "service uptime", "migration counts"],
                ["cluster", "instance", "workload", "region", "tenant"],
            ),
            "social networks": (
                ["active user counts", "post volumes", "advertising revenue", "moderation actions"],
                ["feed", "follower", "hashtag", "creator", "timeline"],
            ),
            "cybersecurity": (
                ["incident counts", "patch turnaround times", "phishing attempts", "audit scores"],
                ["firewall", "breach", "credential", "exploit", "honeypot"],
            ),
            "artificial intelligence": (
                ["model training costs", "inference volumes", "accuracy scores", "research funding"],
                ["model", "dataset", "benchmark", "agent", "accelerator"],
            ),
            "open source software": (
                ["contributor counts", "commit volumes", "issue backlogs", "download totals"],
                ["repository", "maintainer", "license", "fork", "changelog"],
            ),
            "consumer electronics": (
                ["gadget shipments", "warranty claims", "trade show orders", "recycling returns"],
                ["gadget", "remote", "speaker", "headset", "adapter"],
            ),
            "telecommunications": (
                ["network coverage", "data traffic", "subscriber totals", "outage minutes"],
                ["tower", "spectrum", "roaming", "bandwidth", "handover"],
            ),
            "semiconductor industry": (
                ["wafer output", "fab utilization", "yield rates", "capital spending"],
                ["wafer", "foundry", "node", "lithography", "packaging"],
            ),
        },
    },
    "health": {
        "groupings": ["by age group", "across clinics", "over recent years"],
        "nouns": ["patient", "clinic", "treatment", "checkup", "referral", "dosage", "recovery"],
        "topics": {
            "hospital care": (
                ["bed occupancy", "admission counts", "average stay lengths", "readmission rates"],
                ["ward", "surgeon", "triage", "discharge", "intensive care unit"],
            ),
            "nutrition": (
                ["calorie intake", "vegetable consumption", "supplement spending", "meal plan enrollments"],
                ["diet", "protein", "fiber", "vitamin", "portion"],
            ),
            "fitness training": (
                ["workout frequency", "membership renewals", "class attendance", "personal best counts"],
                ["gym", "coach", "treadmill", "routine", "stretch"],
            ),
            "mental health services": (
                ["counseling sessions", "waitlist lengths", "helpline calls", "program completions"],
                ["therapist", "session", "mindfulness", "screening", "support group"],
            ),
            "pharmaceuticals": (
                ["prescription volumes", "trial enrollments", "generic substitutions", "adverse event reports"],
                ["tablet", "dose", "pharmacy", "compound", "trial"],
            ),
            "dentistry": (
                ["cleaning appointments", "cavity counts", "orthodontic cases", "whitening requests"],
                ["molar", "crown", "floss", "brace", "enamel"],
            ),
            "sleep research": (
                ["average sleep durations", "insomnia reports", "nap frequencies", "sleep study enrollments"],
                ["dream", "melatonin", "snoring", "bedtime", "alarm"],
            ),
            "public vaccination": (
                ["dose administrations", "coverage rates", "clinic throughput", "booster uptake"],
                ["vial", "syringe", "cold chain", "campaign", "registry"],
            ),
            "physiotherapy": (
                ["rehabilitation sessions", "mobility scores", "home exercise adherence", "equipment loans"],
                ["stretch", "posture", "joint", "massage", "brace"],
            ),
        },
    },
    "environment": {
        "groupings": ["by region", "across habitats", "over the past decade"],
        "nouns": ["ecosystem", "habitat", "emission", "survey", "sensor", "policy", "restoration"],
        "topics": {
            "renewable energy": (
                ["solar capacity", "wind generation", "battery storage installations", "grid feed volumes"],
                ["turbine", "panel", "inverter", "substation", "microgrid"],
            ),
            "recycling programs": (
                ["collection volumes", "contamination rates", "participation rates", "processing costs"],
                ["bin", "compost", "plastic", "glass", "sorting"],
            ),
            "urban air quality": (
                ["particulate readings", "ozone exceedances", "monitoring station counts", "alert days"],
                ["smog", "pollutant", "monitor", "inversion", "exhaust"],
            ),
            "wildlife conservation": (
                ["population counts", "ranger patrols", "tagging operations", "sanctuary funding"],
                ["ranger", "migration", "nest", "predator", "sanctuary"],
            ),
            "forestry": (
                ["timber harvests", "replanting areas", "wildfire incidents", "canopy cover"],
                ["sapling", "lumber", "grove", "understory", "firebreak"],
            ),
            "water management": (
                ["reservoir levels", "household consumption", "leak repairs", "treatment volumes"],
                ["aquifer", "pipeline", "runoff", "dam", "irrigation"],
            ),
            "climate adaptation": (
                ["flood defense spending", "heatwave days", "retrofit grants", "resilience scores"],
                ["levee", "drought", "storm surge", "retrofit", "cooling center"],
            ),
            "sustainable agriculture": (
                ["crop yields", "soil health scores", "cover crop acreage", "water savings"],
                ["compost", "rotation", "pollinator", "greenhouse", "tillage"],
            ),
            "ocean health": (
                ["coral cover", "fish stock estimates", "plastic debris counts", "acidity readings"],
                ["reef", "plankton", "trawler", "kelp", "buoy"],
            ),
        },
    },
    "economy": {
        "groupings": ["by sector", "across regions", "over successive quarters"],
        "nouns": ["market", "portfolio", "forecast", "index", "margin", "dividend", "valuation"],
        "topics": {
            "retail banking": (
                ["deposit balances", "loan approvals", "branch visits", "mobile transactions"],
                ["teller", "mortgage", "overdraft", "savings", "statement"],
            ),
            "stock markets": (
                ["trading volumes", "listing counts", "volatility readings", "dividend payouts"],
                ["ticker", "broker", "futures", "exchange", "rally"],
            ),
            "small business": (
                ["new registrations", "payroll totals", "storefront vacancies", "grant awards"],
                ["invoice", "storefront", "founder", "ledger", "supplier"],
            ),
            "real estate": (
                ["home prices", "listing volumes", "days on market", "rental yields"],
                ["listing", "tenant", "appraisal", "escrow", "landlord"],
            ),
            "insurance": (
                ["policy counts", "claim payouts", "premium revenue", "fraud investigations"],
                ["premium", "claim", "underwriter", "deductible", "actuary"],
            ),
            "international trade": (
                ["export values", "container throughput", "tariff revenue", "customs clearances"],
                ["tariff", "freight", "customs", "shipment", "quota"],
            ),
            "cryptocurrency": (
                ["wallet activations", "transaction volumes", "mining difficulty readings", "exchange inflows"],
                ["wallet", "ledger", "token", "miner", "exchange"],
            ),
            "venture capital": (
                ["deal counts", "fund sizes", "follow-on rounds", "exit valuations"],
                ["pitch", "term sheet", "portfolio", "founder", "runway"],
            ),
            "household budgeting": (
                ["grocery spending", "utility bills", "savings rates", "subscription costs"],
                ["allowance", "receipt", "coupon", "pantry", "utility"],
            ),
        },
    },
    "education": {
        "groupings": ["by grade level", "across districts", "over recent terms"],
        "nouns": ["student", "teacher", "curriculum", "exam", "enrollment", "scholarship", "classroom"],
        "topics": {
            "primary schooling": (
                ["class sizes", "attendance rates", "reading scores", "lunch program uptake"],
                ["recess", "homework", "pupil", "assembly", "workbook"],
            ),
            "university admissions": (
                ["application counts", "acceptance rates", "scholarship awards", "campus tour bookings"],
                ["applicant", "transcript", "essay", "dormitory", "faculty"],
            ),
            "online courses": (
                ["enrollment totals", "completion rates", "forum activity", "certificate issuances"],
                ["module", "quiz", "webinar", "cohort", "badge"],
            ),
            "vocational training": (
                ["apprenticeship placements", "certification passes", "workshop hours", "employer partnerships"],
                ["apprentice", "workshop", "trade", "toolkit", "mentor"],
            ),
            "school libraries": (
                ["book loans", "reading club memberships", "new acquisitions", "study room bookings"],
                ["catalog", "librarian", "shelf", "storytime", "periodical"],
            ),
            "language learning": (
                ["lesson completions", "vocabulary quiz scores", "conversation club attendance", "app streaks"],
                ["flashcard", "grammar", "tutor", "phrasebook", "immersion"],
            ),
            "adult education": (
                ["evening class enrollments", "diploma completions", "childcare support requests", "tuition subsidies"],
                ["night class", "diploma", "returner", "seminar", "bursary"],
            ),
            "student housing": (
                ["dorm occupancy", "rent levels", "maintenance requests", "waitlist lengths"],
                ["dormitory", "roommate", "lease", "common room", "warden"],
            ),
            "academic publishing": (
                ["submission counts", "review turnaround times", "citation totals", "open access fees"],
                ["manuscript", "referee", "journal", "preprint", "erratum"],
            ),
        },
    },
    "transport": {
        "groupings": ["by route", "across cities", "over recent years"],
        "nouns": ["passenger", "route", "terminal", "fleet", "fare", "schedule", "depot"],
        "topics": {
            "urban transit": (
                ["ridership totals", "on-time performance", "fare revenue", "service frequencies"],
                ["tram", "metro", "turnstile", "interchange", "timetable"],
            ),
            "air travel": (
                ["passenger volumes", "load factors", "delay minutes", "baggage mishandling rates"],
                ["runway", "boarding", "layover", "cabin", "gate"],
            ),
            "electric vehicles": (
                ["registration counts", "charging session volumes", "average ranges", "battery replacement costs"],
                ["charger", "range", "battery", "plug", "showroom"],
            ),
            "cycling infrastructure": (
                ["bike lane mileage", "counter readings", "share scheme rentals", "collision reports"],
                ["pannier", "helmet", "dock", "greenway", "commuter"],
            ),
            "freight logistics": (
                ["tonnage moved", "warehouse throughput", "delivery times", "fuel consumption"],
                ["pallet", "forklift", "manifest", "depot", "haulier"],
            ),
            "ride sharing": (
                ["trip counts", "driver earnings", "surge frequency", "wait times"],
                ["pickup", "dropoff", "surge", "rating", "pool"],
            ),
            "high speed rail": (
                ["seat occupancy", "punctuality rates", "track mileage", "station footfall"],
                ["viaduct", "carriage", "pantograph", "concourse", "signal"],
            ),
            "maritime shipping": (
                ["container volumes", "port calls", "berth waiting times", "bunker fuel prices"],
                ["berth", "stevedore", "hull", "manifest", "tugboat"],
            ),
            "road safety": (
                ["collision counts", "speeding citations", "seatbelt compliance", "crossing upgrades"],
                ["junction", "signage", "guardrail", "crosswalk", "speed bump"],
            ),
        },
    },
    "food": {
        "groupings": ["by cuisine", "across neighborhoods", "over recent seasons"],
        "nouns": ["menu", "recipe", "ingredient", "kitchen", "flavor", "portion", "tasting"],
        "topics": {
            "restaurant industry": (
                ["cover counts", "table turnover", "tip percentages", "reservation volumes"],
                ["waiter", "bistro", "entree", "reservation", "patio"],
            ),
            "coffee culture": (
                ["cup sales", "bean imports", "loyalty card signups", "barista competition entries"],
                ["espresso", "roast", "barista", "grinder", "latte"],
            ),
            "craft brewing": (
                ["barrel output", "taproom visits", "seasonal release counts", "hop purchases"],
                ["hop", "malt", "fermenter", "taproom", "growler"],
            ),
            "home baking": (
                ["flour sales", "recipe searches", "baking class signups", "stand mixer shipments"],
                ["sourdough", "yeast", "whisk", "frosting", "proofing"],
            ),
            "street food": (
                ["stall counts", "festival attendance", "permit issuances", "queue lengths"],
                ["stall", "vendor", "skewer", "food truck", "napkin"],
            ),
            "organic farming": (
                ["certified acreage", "farm gate prices", "box scheme subscriptions", "weed control hours"],
                ["heirloom", "manure", "hedgerow", "orchard", "beehive"],
            ),
            "food delivery": (
                ["order volumes", "delivery times", "courier earnings", "packaging waste"],
                ["courier", "order", "satchel", "doorstep", "dispatch"],
            ),
            "cheese making": (
                ["wheel production", "aging cellar stocks", "dairy intake volumes", "award entries"],
                ["curd", "rennet", "rind", "creamery", "cave"],
            ),
            "regional cuisine": (
                ["cookbook sales", "festival visitor counts", "heritage recipe registrations", "tasting menu bookings"],
                ["spice", "terroir", "casserole", "market hall", "delicacy"],
            ),
        },
    },
    "sports": {
        "groupings": ["by team", "across leagues", "over recent seasons"],
        "nouns": ["match", "coach", "stadium", "transfer", "fixture", "supporter", "trophy"],
        "topics": {
            "professional football": (
                ["goals scored", "attendance figures", "pass completion rates", "transfer spending"],
                ["midfielder", "penalty", "offside", "derby", "kit"],
            ),
            "basketball leagues": (
                ["points per game", "arena attendance", "three point attempts", "merchandise sales"],
                ["dunk", "rebound", "playoff", "court", "buzzer"],
            ),
            "tennis tournaments": (
                ["ace counts", "match durations", "prize money totals", "ticket sales"],
                ["baseline", "tiebreak", "seeding", "racquet", "umpire"],
            ),
            "marathon running": (
                ["finisher counts", "average finish times", "charity fundraising totals", "aid station volumes"],
                ["pacer", "bib", "split", "taper", "hydration"],
            ),
            "competitive swimming": (
                ["lap times", "meet entries", "lane record counts", "training volumes"],
                ["freestyle", "flip turn", "goggles", "relay", "starting block"],
            ),
            "winter sports": (
                ["lift ticket sales", "snowfall totals", "race entries", "equipment rentals"],
                ["slalom", "piste", "chairlift", "wax", "mogul"],
            ),
            "esports": (
                ["viewership peaks", "prize pools", "roster changes", "scrim hours"],
                ["roster", "scrim", "caster", "bracket", "meta"],
            ),
            "gym membership": (
                ["signup counts", "visit frequencies", "class bookings", "cancellation rates"],
                ["locker", "dumbbell", "spin class", "trainer", "sauna"],
            ),
            "youth athletics": (
                ["club registrations", "meet participation", "personal best counts", "volunteer coach hours"],
                ["relay", "high jump", "track meet", "javelin", "heat"],
            ),
        },
    },
    "science": {
        "groupings": ["by research group", "across facilities", "over recent years"],
        "nouns": ["experiment", "instrument", "observation", "publication", "grant", "laboratory", "conference"],
        "topics": {
            "space exploration": (
                ["launch counts", "payload masses", "mission durations", "orbital debris trackings"],
                ["booster", "probe", "lander", "telemetry", "heat shield"],
            ),
            "particle physics": (
                ["collision event counts", "beam luminosity readings", "detector uptime", "preprint submissions"],
                ["collider", "detector", "muon", "calorimeter", "beamline"],
            ),
            "marine biology": (
                ["specimen catches", "dive survey counts", "tagging operations", "plankton densities"],
                ["specimen", "dive", "tide pool", "sonar", "holdfast"],
            ),
            "archaeology": (
                ["excavation sites", "artifact catalogings", "radiocarbon samples", "field school enrollments"],
                ["trench", "shard", "stratum", "dig", "relic"],
            ),
            "astronomy outreach": (
                ["stargazing event attendance", "telescope loans", "planetarium shows", "astronomy club memberships"],
                ["telescope", "eyepiece", "nebula", "star party", "dome"],
            ),
            "genetics research": (
                ["sequencing runs", "sample throughput", "variant catalog sizes", "biobank enrollments"],
                ["genome", "sequencer", "primer", "biobank", "pipette"],
            ),
            "meteorology": (
                ["forecast accuracy scores", "weather balloon launches", "storm warnings", "rainfall totals"],
                ["barometer", "front", "radiosonde", "isobar", "anemometer"],
            ),
            "materials science": (
                ["alloy test batches", "tensile strength readings", "coating trials", "patent filings"],
                ["alloy", "polymer", "ceramic", "crystal", "composite"],
            ),
        },
    },
    "society": {
        "groupings": ["by district", "across age groups", "over recent years"],
        "nouns": ["resident", "community", "survey", "program", "initiative", "council", "volunteer"],
        "topics": {
            "urban demographics": (
                ["population growth", "household sizes", "commute durations", "new arrivals"],
                ["census", "suburb", "migration", "block", "density"],
            ),
            "volunteering": (
                ["volunteer hours", "signup counts", "event staffing levels", "background checks"],
                ["shift", "charity", "drive", "orientation", "coordinator"],
            ),
            "public libraries": (
                ["visitor counts", "loan volumes", "program attendance", "computer session bookings"],
                ["stacks", "card", "archive", "reading room", "bookmobile"],
            ),
            "museums": (
                ["admission counts", "exhibition durations", "membership renewals", "gift shop revenue"],
                ["gallery", "curator", "exhibit", "docent", "artifact"],
            ),
            "civic participation": (
                ["town hall attendance", "petition signatures", "voter turnout", "consultation responses"],
                ["ballot", "precinct", "hearing", "referendum", "canvass"],
            ),
            "housing policy": (
                ["permit approvals", "affordable unit completions", "eviction filings", "housing waitlists"],
                ["zoning", "tenancy", "subsidy", "retrofit", "inspection"],
            ),
            "charitable giving": (
                ["donation totals", "donor counts", "matching pledge volumes", "fundraiser events"],
                ["pledge", "endowment", "gala", "raffle", "telethon"],
            ),
            "neighborhood safety": (
                ["patrol hours", "streetlight repairs", "watch group memberships", "incident reports"],
                ["patrol", "watch", "beat", "callout", "siren"],
            ),
        },
    },
    "travel": {
        "groupings": ["by destination", "across seasons", "over recent years"],
        "nouns": ["traveler", "itinerary", "booking", "luggage", "guide", "passport", "souvenir"],
        "topics": {
            "international tourism": (
                ["arrival counts", "visitor spending", "average stay lengths", "visa issuances"],
                ["landmark", "embassy", "excursion", "customs", "resort"],
            ),
            "hotel industry": (
                ["occupancy rates", "nightly rates", "loyalty program signups", "review scores"],
                ["lobby", "concierge", "suite", "housekeeping", "minibar"],
            ),
            "backpacking": (
                ["hostel bookings", "trail permit issuances", "gear spending", "route completions"],
                ["hostel", "rucksack", "trailhead", "bunk", "waypoint"],
            ),
            "cruise lines": (
                ["berth bookings", "port excursion sales", "onboard spending", "itinerary counts"],
                ["cabin", "gangway", "steward", "porthole", "deck"],
            ),
            "national parks": (
                ["gate entries", "campsite reservations", "trail maintenance hours", "ranger program attendance"],
                ["trailhead", "campfire", "overlook", "permit", "wilderness"],
            ),
            "city breaks": (
                ["weekend booking volumes", "museum pass sales", "walking tour attendance", "cafe spending"],
                ["piazza", "tram", "gallery", "old town", "viewpoint"],
            ),
            "travel insurance": (
                ["policy sales", "claim counts", "medical evacuation costs", "cancellation payouts"],
                ["deductible", "rider", "claim form", "assistance line", "exclusion"],
            ),
            "camping": (
                ["pitch bookings", "gear rental volumes", "firewood sales", "site upgrade spending"],
                ["tent", "lantern", "campsite", "sleeping bag", "stove"],
            ),
        },
    },
}

ALL_TYPES = [
    "bar",
    "line",
    "radar",
    "stacked_bar",
    "doughnut",
    "pie",
    "scatter",
    "boxplot",
    "stacked_area",
]
# Families describing progression along an ordered axis only make sense
# where the chart has one; pie/doughnut/radar/boxplot series are unordered.
ORDERED_TYPES = ["bar", "line", "stacked_bar", "scatter", "stacked_area"]


def trend_rows() -> list[tuple[str, str, str, str]]:
    rows: list[tuple[str, str, list[str], dict]] = []

    inc_rates = [0.03, 0.05, 0.08, 0.12, 0.18, 0.25, 0.35, 0.5]
    inc_names = ["gentle", "mild", "steady", "moderate", "brisk", "strong", "sharp", "steep"]
    for name, rate in zip(inc_names, inc_rates):
        rows.append((f"inc_{name}", "monotone_increasing", ALL_TYPES, {"rate": rate, "min_len": 2}))
    for name, rate in zip(inc_names, inc_rates):
        rows.append((f"dec_{name}", "monotone_decreasing", ALL_TYPES, {"rate": rate, "min_len": 2}))

    for name, jitter in [("exact", 0.0), ("hair", 0.002), ("faint", 0.004), ("soft", 0.006)]:
        rows.append((f"const_{name}", "constant", ALL_TYPES, {"jitter": jitter, "min_len": 2}))

    for pos in ["early", "middle", "late", "any"]:
        for mag in [3.0, 4.5]:
            tag = str(mag).replace(".", "p")
            rows.append((f"spike_{pos}_x{tag}", "spike", ALL_TYPES, {"pos": pos, "magnitude": mag, "min_len": 4}))
            rows.append((f"dip_{pos}_x{tag}", "dip", ALL_TYPES, {"pos": pos, "magnitude": mag, "min_len": 4}))

    for direction in ["up", "down"]:
        for frac in [0.4, 0.6]:
            for rate in [0.1, 0.18]:
                tag = str(rate).replace(".", "p")
                rows.append(
                    (
                        f"plateau_{direction}_{int(frac * 100)}_{tag}",
                        "plateau_then_change",
                        ORDERED_TYPES,
                        {"direction": direction, "break_frac": frac, "change_rate": rate, "min_len": 5},
                    )
                )

    cyc = [(2, 0.25), (2, 0.35), (2, 0.45), (3, 0.25), (3, 0.35), (3, 0.45), (4, 0.25), (4, 0.45)]
    for period, amp in cyc:
        tag = str(amp).replace(".", "p")
        rows.append(
            (
                f"cyclic_p{period}_a{tag}",
                "cyclic",
                ORDERED_TYPES,
                {"period": period, "amplitude": amp, "min_len": 2 * period},
            )
        )

    for swing in [0.18, 0.25, 0.35, 0.45, 0.6, 0.8]:
        tag = str(swing).replace(".", "p")
        rows.append((f"volatile_s{tag}", "volatile", ALL_TYPES, {"swing": swing, "min_len": 4}))

    acc = [(2.0, 0.8), (2.0, 1.5), (2.0, 2.5), (3.0, 0.8), (3.0, 1.5), (3.0, 2.5), (2.5, 1.2), (2.5, 2.0)]
    for power, gain in acc:
        ptag = str(power).replace(".", "p")
        gtag = str(gain).replace(".", "p")
        rows.append(
            (f"accel_{ptag}_{gtag}", "accelerating", ORDERED_TYPES, {"power": power, "gain": gain, "min_len": 4})
        )
    dec = [(0.33, 0.8), (0.33, 1.5), (0.33, 2.5), (0.5, 0.8), (0.5, 1.5), (0.5, 2.5), (0.4, 1.2), (0.4, 2.0)]
    for power, gain in dec:
        ptag = str(power).replace(".", "p")
        gtag = str(gain).replace(".", "p")
        rows.append(
            (f"slow_{ptag}_{gtag}", "decelerating", ORDERED_TYPES, {"power": power, "gain": gain, "min_len": 4})
        )

    out = []
    for trend_id, family, types, params in rows:
        out.append((trend_id, family, ",".join(types), json.dumps(params, sort_keys=True)))
    return out


def main() -> int:
    OUT_DIR.mkdir(parents=True, exist_ok=True)

    theme_lines = []
    lexicon_lines = []
    seen_topics = set()
    for domain in DOMAINS.values():
        groupings = domain["groupings"]
        shared_nouns = domain["nouns"]
        for topic, (measures, nouns) in domain["topics"].items():
            if topic in seen_topics:
                raise SystemExit(f"duplicate topic: {topic}")
            seen_topics.add(topic)
            for measure in measures:
                for grouping in groupings:
                    phrase = f"{measure} {grouping}"
                    if any(ch.isdigit() for ch in phrase):
                        raise SystemExit(f"digit in theme phrase: {phrase!r}")
                    if len(phrase) > 120:
                        raise SystemExit(f"theme phrase too long: {phrase!r}")
                    theme_lines.append(f"{topic}\t{phrase}")
            lexicon = list(dict.fromkeys([*nouns, *shared_nouns]))
            if not 10 <= len(lexicon) <= 40:
                raise SystemExit(f"lexicon for {topic} has {len(lexicon)} nouns, need 10-40")
            for noun in lexicon:
                lexicon_lines.append(f"{topic}\t{noun}")

    if len(theme_lines) != len(set(theme_lines)):
        raise SystemExit("duplicate theme entries")
    if len(seen_topics) < 100:
        raise SystemExit(f"only {len(seen_topics)} topics, need >= 100")
    if len(theme_lines) < 1000:
        raise SystemExit(f"only {len(theme_lines)} themes, need >= 1000")

    trends = trend_rows()
    ids = [t[0] for t in trends]
    if len(ids) != len(set(ids)):
        raise SystemExit("duplicate trend ids")
    per_type: dict[str, int] = {t: 0 for t in ALL_TYPES}
    for _, _, types, _ in trends:
        for t in types.split(","):
            per_type[t] += 1
    for t, n in per_type.items():
        if n < 6:
            raise SystemExit(f"chart type {t} has only {n} applicable trends")

    (OUT_DIR / "themes.tsv").write_text("\n".join(theme_lines) + "\n", encoding="utf-8")
    (OUT_DIR / "lexicon.tsv").write_text("\n".join(lexicon_lines) + "\n", encoding="utf-8")
    (OUT_DIR / "trends.tsv").write_text(
        "\n".join("\t".join(row) for row in trends) + "\n", encoding="utf-8"
    )
    print(
        f"wrote {len(theme_lines)} themes over {len(seen_topics)} topics, "
        f"{len(lexicon_lines)} lexicon rows, {len(trends)} trends"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
