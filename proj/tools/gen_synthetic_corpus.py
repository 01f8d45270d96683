#!/usr/bin/env python3
"""Writes the bundled synthetic Solidity corpus (60 method/comment pairs)."""

import argparse
import json
import random

SUBJECTS = [
    ("balance", "balances", "uint256"),
    ("allowance", "allowances", "uint256"),
    ("reward", "rewards", "uint256"),
    ("stake", "stakes", "uint256"),
    ("deposit", "deposits", "uint256"),
    ("vote", "votes", "uint256"),
]

OWNERS = ["owner", "account", "holder", "user", "member", "investor"]


def getter(rng, subject, store, typ, who):
    name = "get" + subject.capitalize() + "Of"
    code = (
        f"function {name}(address {who}) public view returns ({typ}) {{\n"
        f"    return {store}[{who}];\n"
        f"}}"
    )
    comment = f"returns the {subject} recorded for the given {who}"
    return code, comment


def setter(rng, subject, store, typ, who):
    name = "set" + subject.capitalize()
    code = (
        f"function {name}(address {who}, {typ} amount) external onlyOwner {{\n"
        f"    require({who} != address(0), \"zero address\");\n"
        f"    {store}[{who}] = amount;\n"
        f"    emit {subject.capitalize()}Updated({who}, amount);\n"
        f"}}"
    )
    comment = f"sets the {subject} of a {who} and emits an update event"
    return code, comment


def increase(rng, subject, store, typ, who):
    name = "increase" + subject.capitalize()
    code = (
        f"function {name}(address {who}, {typ} delta) internal returns (bool) {{\n"
        f"    {store}[{who}] = {store}[{who}] + delta;\n"
        f"    total{subject.capitalize()} += delta;\n"
        f"    return true;\n"
        f"}}"
    )
    comment = f"adds delta to the {subject} of {who} and to the running total"
    return code, comment


def decrease(rng, subject, store, typ, who):
    name = "decrease" + subject.capitalize()
    code = (
        f"function {name}(address {who}, {typ} delta) internal {{\n"
        f"    require({store}[{who}] >= delta, \"insufficient {subject}\");\n"
        f"    unchecked {{\n"
        f"        {store}[{who}] -= delta;\n"
        f"    }}\n"
        f"}}"
    )
    comment = f"subtracts delta from the {subject} of {who} after checking funds"
    return code, comment


def move(rng, subject, store, typ, who):
    name = "move" + subject.capitalize()
    code = (
        f"function {name}(address from, address to, {typ} value) public returns (bool) {{\n"
        f"    require(to != address(0));\n"
        f"    require({store}[from] >= value);\n"
        f"    {store}[from] -= value;\n"
        f"    {store}[to] += value;\n"
        f"    emit Transfer(from, to, value);\n"
        f"    return true;\n"
        f"}}"
    )
    comment = f"moves {subject} between two addresses and emits a transfer event"
    return code, comment


def clear(rng, subject, store, typ, who):
    name = "clear" + subject.capitalize()
    code = (
        f"function {name}(address[] calldata list) external onlyOwner {{\n"
        f"    for (uint256 i = 0; i < list.length; i++) {{\n"
        f"        delete {store}[list[i]];\n"
        f"    }}\n"
        f"}}"
    )
    comment = f"deletes the stored {subject} for every address in the list"
    return code, comment


def only_role(rng, subject, store, typ, who):
    code = (
        f"modifier only{who.capitalize()}With{subject.capitalize()}() {{\n"
        f"    require({store}[msg.sender] > 0, \"no {subject}\");\n"
        f"    _;\n"
        f"}}"
    )
    comment = f"restricts access to callers holding a positive {subject}"
    return code, comment


def paused_withdraw(rng, subject, store, typ, who):
    code = (
        f"function withdraw{subject.capitalize()}() external nonReentrant {{\n"
        f"    {typ} amount = {store}[msg.sender];\n"
        f"    if (amount == 0) {{\n"
        f"        revert Nothing{subject.capitalize()}();\n"
        f"    }}\n"
        f"    {store}[msg.sender] = 0;\n"
        f"    payable(msg.sender).transfer(amount);\n"
        f"}}"
    )
    comment = f"pays out the whole {subject} of the caller and resets it"
    return code, comment


def has_enough(rng, subject, store, typ, who):
    code = (
        f"function has{subject.capitalize()}(address {who}, {typ} minimum) public view returns (bool) {{\n"
        f"    return {store}[{who}] >= minimum ? true : false;\n"
        f"}}"
    )
    comment = f"checks whether a {who} holds at least the minimum {subject}"
    return code, comment


def ratio(rng, subject, store, typ, who):
    code = (
        f"function {subject}Share(address {who}) external view returns ({typ}) {{\n"
        f"    if (total{subject.capitalize()} == 0) return 0;\n"
        f"    return {store}[{who}] * 1e18 / total{subject.capitalize()};\n"
        f"}}"
    )
    comment = f"computes the share of total {subject} owned by a {who}"
    return code, comment


FAMILIES = [getter, setter, increase, decrease, move, clear, only_role, paused_withdraw, has_enough, ratio]


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--output", required=True)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    records = []
    for fi, family in enumerate(FAMILIES):
        for si, (subject, store, typ) in enumerate(SUBJECTS):
            who = OWNERS[(fi + si) % len(OWNERS)]
            code, comment = family(rng, subject, store, typ, who)
            records.append({"id": f"syn-{fi:02d}-{si:02d}", "code": code, "comment": comment})
    rng.shuffle(records)
    with open(args.output, "w", encoding="utf-8") as f:
        for r in records:
            f.write(json.dumps(r, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()
