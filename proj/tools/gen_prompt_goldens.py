#!/usr/bin/env python3
"""Writes golden prompts for a fixed query and five demonstrations.

The rendering here is written from the prompt contract, independently of the
C++ renderer: header line, optional demo announcement, demo blocks (each
comment line prefixed with '#', then the code), target code, length cap.
"""

import argparse
import json
import math
from pathlib import Path

HEADER = "To generate a short summarization in one sentence for smart contract code."
ANNOUNCE = "To alleviate the difficulty of this task, we will give you top-{k} examples. Please learn from them."

QUERY = (
    "function withdrawReward(address account) external returns (uint256) {\n"
    "    uint256 amount = rewards[account];\n"
    "    rewards[account] = 0;\n"
    "    token.transfer(account, amount);\n"
    "    return amount;\n"
    "}"
)

# Ordered most similar first, as retrieval returns them.
DEMOS = [
    {"id": "d1", "comment": "transfers the accumulated reward of an account to it and resets the balance",
     "code": "function claimReward(address account) public {\n    uint256 r = pending[account];\n    pending[account] = 0;\n    token.transfer(account, r);\n}"},
    {"id": "d2", "comment": "withdraws the caller's stake",
     "code": "function withdraw(uint256 amount) external {\n    stakes[msg.sender] -= amount;\n    token.transfer(msg.sender, amount);\n}"},
    {"id": "d3", "comment": "returns the reward owed to an account\nreverts when the account is unknown",
     "code": "function rewardOf(address account) public view returns (uint256) {\n    require(known[account]);\n    return rewards[account];\n}"},
    {"id": "d4", "comment": "pays out pending dividends",
     "code": "function payDividends(address to) internal { uint256 d = dividends[to]; dividends[to] = 0; payable(to).transfer(d); }"},
    {"id": "d5", "comment": "sets the reward rate",
     "code": "function setRate(uint256 rate) external onlyOwner {\n    rewardRate = rate;\n}"},
]


def demo_block(d):
    lines = ["#" + line for line in d["comment"].split("\n")]
    return "\n".join(lines) + "\n" + d["code"] + "\n"


def render(demos, cap, most_similar_last=True):
    parts = [HEADER + "\n"]
    if demos:
        parts.append(ANNOUNCE.format(k=len(demos)) + "\n")
        ordered = list(reversed(demos)) if most_similar_last else list(demos)
        for d in ordered:
            parts.append("\n" + demo_block(d))
    parts.append("\nTarget code:\n" + QUERY + "\n")
    parts.append("The length should not exceed " + cap + "\n")
    return "".join(parts)


def words(text):
    return len(text.split())


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("outdir", type=Path)
    out = ap.parse_args().outdir
    out.mkdir(parents=True, exist_ok=True)
    cap = f"{words(DEMOS[0]['comment'])} words"
    files = {
        "zero_shot.txt": render([], "15 words"),
        "one_shot.txt": render(DEMOS[:1], cap),
        "few_shot.txt": render(DEMOS, cap),
        "few_shot_most_similar_first.txt": render(DEMOS, cap, most_similar_last=False),
        "few_shot_literal_cap.txt": render(DEMOS, DEMOS[0]["comment"]),
    }
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8")
    meta = {
        "query": QUERY,
        "demos": DEMOS,
        "estimated_tokens": {name: math.ceil(1.3 * words(text) - 1e-9) for name, text in files.items()},
    }
    (out / "prompt_inputs.json").write_text(json.dumps(meta, indent=2) + "\n", encoding="utf-8")


if __name__ == "__main__":
    main()
