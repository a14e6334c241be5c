#!/usr/bin/env python3
"""Writes the deterministic synthetic match used by the golden tests.

Two teams of 11 starters plus one bench substitute each, 90 minutes of
possession sequences, two yellow cards, three goals with assists and two
substitutions. Output matches the public event-dataset layout.
"""

import argparse
import csv
import json
import random
from pathlib import Path

SEED = 20180706
MATCH_ID = 2057978
TEAMS = {
    100: {"name": "Azure", "first": 1001},
    200: {"name": "Crimson", "first": 2001},
}
ROLES = ["Goalkeeper"] + ["Defender"] * 4 + ["Midfielder"] * 4 + ["Forward"] * 2
ROLE_CODES = {"Goalkeeper": "GK", "Defender": "DF", "Midfielder": "MD", "Forward": "FW"}
BENCH_ROLE = {100: "Forward", 200: "Midfielder"}
# (team, player out index, minute); bench player is index 11
SUBSTITUTIONS = [(200, 6, 60), (100, 9, 70)]
HALF_SECONDS = {"1H": 2760.0, "2H": 2820.0}
TAG_NAMES = {
    101: "Goal", 302: "assist", 401: "Left foot", 701: "lost", 703: "won",
    1401: "interception", 1702: "yellow_card", 1801: "accurate", 1802: "not_accurate",
}


def player_ids(team):
    first = TEAMS[team]["first"]
    return [first + i for i in range(12)]


def on_field(team, half, sec):
    minute = (sec + (45 * 60 if half == "2H" else 0)) / 60.0
    ids = player_ids(team)
    active = ids[:11]
    for t, out_idx, sub_minute in SUBSTITUTIONS:
        if t == team and minute >= sub_minute:
            active = [p for p in active if p != ids[out_idx]] + [ids[11]]
    return active


def role_of(team, pid):
    idx = pid - TEAMS[team]["first"]
    return BENCH_ROLE[team] if idx == 11 else ROLES[idx]


def tags_cell(codes):
    return "[" + ", ".join("{'id': %d}" % c for c in codes) + "]"


class Writer:
    def __init__(self):
        self.rows = []

    def add(self, team, pid, name, sub, tags, half, sec):
        self.rows.append([MATCH_ID, team, pid, name, sub, tags_cell(tags), "%.3f" % sec, half])


def outfield(team, half, sec):
    return [p for p in on_field(team, half, sec) if role_of(team, p) != "Goalkeeper"]


def simulate(rng):
    w = Writer()
    scripted = {
        # (half, approx second): (team, role filter, kind)
        ("1H", 1200.0): (100, "Forward", "goal"),
        ("1H", 1800.0): (100, "Defender", "yellow"),
        ("2H", 900.0): (200, "Forward", "goal"),
        ("2H", 1500.0): (200, "Forward", "yellow"),
        ("2H", 2100.0): (100, "Forward", "goal"),
    }
    pending = sorted(scripted.items(), key=lambda kv: (kv[0][0], kv[0][1]))
    for half in ("1H", "2H"):
        sec = 2.0
        team = 100 if half == "1H" else 200
        while sec < HALF_SECONDS[half]:
            script = None
            if pending and pending[0][0][0] == half and sec >= pending[0][0][1]:
                script = pending.pop(0)[1]
                team = script[0]
            players = outfield(team, half, sec)
            carrier = rng.choice(players)
            for _ in range(rng.randint(2, 6)):
                receiver = rng.choice([p for p in players if p != carrier])
                accurate = script is not None or rng.random() < 0.82
                w.add(team, carrier, "Pass", rng.choice(["Simple pass", "High pass", "Cross"]),
                      [1801 if accurate else 1802], half, sec)
                sec += rng.uniform(2.0, 5.0)
                if not accurate:
                    break
                carrier = receiver
            else:
                accurate = True
            other = 300 - team
            if script:
                kind = script[2]
                if kind == "goal":
                    scorer = next(p for p in outfield(team, half, sec) if role_of(team, p) == "Forward")
                    assister = rng.choice([p for p in outfield(team, half, sec) if p != scorer])
                    w.add(team, assister, "Pass", "Smart pass", [302, 1801], half, sec)
                    sec += 2.5
                    sub = "Goal" if half == "1H" else "Shot"
                    w.add(team, scorer, "Shot", sub, [101, 401, 1801], half, sec)
                    sec += 60.0
                    team = other
                    continue
                carded = next(p for p in outfield(team, half, sec) if role_of(team, p) == script[1])
                w.add(team, carded, "Foul", "Foul", [1702], half, sec)
                sec += 30.0
                team = other
                continue
            roll = rng.random()
            if accurate and roll < 0.15:
                w.add(team, carrier, "Shot", "Shot", [1801 if rng.random() < 0.4 else 1802], half, sec)
                sec += rng.uniform(8.0, 15.0)
                team = other
            elif roll < 0.55:
                a = rng.choice(outfield(team, half, sec))
                b = rng.choice(outfield(other, half, sec))
                won = rng.random() < 0.5
                w.add(team, a, "Duel", "Ground attacking duel", [703 if won else 701], half, sec)
                w.add(other, b, "Duel", "Ground defending duel", [701 if won else 703], half, sec + 0.2)
                sec += rng.uniform(2.0, 4.0)
                if not won:
                    team = other
            elif roll < 0.7:
                d = rng.choice(outfield(other, half, sec))
                w.add(other, d, "Others on the ball", "Clearance", [1401 if rng.random() < 0.5 else 1801], half, sec)
                sec += rng.uniform(3.0, 6.0)
                team = other
            elif roll < 0.8:
                f = rng.choice(outfield(other, half, sec))
                w.add(other, f, "Foul", "Foul", [], half, sec)
                sec += rng.uniform(10.0, 20.0)
            else:
                team = other
                sec += rng.uniform(1.0, 3.0)
            if rng.random() < 0.05:
                gk_team = rng.choice([100, 200])
                gk = player_ids(gk_team)[0]
                w.add(gk_team, gk, "Save attempt", "Reflexes", [1801], half, sec)
                sec += 5.0
    return w.rows


def write(out_dir):
    rng = random.Random(SEED)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows = simulate(rng)
    with open(out_dir / "events_Synthetic.csv", "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["matchId", "teamId", "playerId", "eventName", "subEventName", "tags", "eventSec",
                         "matchPeriod"])
        writer.writerows(rows)

    teams_data = {}
    for team in TEAMS:
        ids = player_ids(team)
        subs = [{"playerIn": ids[11], "playerOut": ids[idx], "minute": minute}
                for t, idx, minute in SUBSTITUTIONS if t == team]
        teams_data[str(team)] = {
            "teamId": team,
            "side": "home" if team == 100 else "away",
            "formation": {
                "lineup": [{"playerId": p} for p in ids[:11]],
                "bench": [{"playerId": ids[11]}],
                "substitutions": subs,
            },
        }
    with open(out_dir / "matches_Synthetic.csv", "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["wyId", "label", "dateutc", "teamsData"])
        writer.writerow([MATCH_ID, "Azure - Crimson, 2 - 1", "2018-07-06 18:00:00",
                         json.dumps(teams_data, separators=(",", ":"))])

    with open(out_dir / "players.csv", "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["wyId", "shortName", "birthDate", "role"])
        for team, info in TEAMS.items():
            for i, pid in enumerate(player_ids(team)):
                role = role_of(team, pid)
                birth = "" if (team == 200 and i == 11) else "%d-%02d-%02d" % (
                    1984 + rng.randint(0, 15), rng.randint(1, 12), rng.randint(1, 28))
                name = "%s %s%d" % (info["name"], ROLE_CODES[role], i + 1)
                writer.writerow([pid, name, birth, "{'code2': '%s', 'name': '%s'}" % (ROLE_CODES[role], role)])

    with open(out_dir / "tags2name.csv", "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["Tag", "Label"])
        for code, label in sorted(TAG_NAMES.items()):
            writer.writerow([code, label])


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("output", nargs="?", default=str(Path(__file__).resolve().parent.parent
                                                         / "tests" / "fixtures" / "synthetic"))
    write(Path(parser.parse_args().output))


if __name__ == "__main__":
    main()
