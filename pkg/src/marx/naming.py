"""Agent naming and per-task verb phrases used in rendered output.

Agents are identified by 1-based integer ids everywhere. Their printable
forms are derived from a configurable noun: id 2 with noun "robot" becomes
the atom "robotII" and the display name "Robot II".
"""

from __future__ import annotations

from dataclasses import dataclass, field

_ROMAN = (
    (1000, "M"), (900, "CM"), (500, "D"), (400, "CD"),
    (100, "C"), (90, "XC"), (50, "L"), (40, "XL"),
    (10, "X"), (9, "IX"), (5, "V"), (4, "IV"), (1, "I"),
)


def roman(n: int) -> str:
    """Roman numeral for a positive integer."""
    if n < 1:
        raise ValueError(f"no roman numeral for {n}")
    out = []
    for value, glyph in _ROMAN:
        while n >= value:
            out.append(glyph)
            n -= value
    return "".join(out)


@dataclass(frozen=True)
class TaskPhrases:
    """Verb phrases for one task: "fight the fire" / "fighting the fire"."""

    infinitive: str
    gerund: str


@dataclass(frozen=True)
class Naming:
    """Rendering vocabulary: agent noun, group noun, per-task phrases."""

    agent_noun: str = "agent"
    group_noun: str = "agents"
    phrases: dict[str, TaskPhrases] = field(default_factory=dict)

    def atom(self, agent_id: int) -> str:
        """Proposition fragment for one agent, e.g. "robotII"."""
        return f"{self.agent_noun}{roman(agent_id)}"

    def display(self, agent_id: int) -> str:
        """Mid-sentence display name, e.g. "Robot II"."""
        return f"{self.agent_noun.capitalize()} {roman(agent_id)}"

    def infinitive(self, task: str) -> str:
        ph = self.phrases.get(task)
        return ph.infinitive if ph else f"complete {task}"

    def gerund(self, task: str) -> str:
        ph = self.phrases.get(task)
        return ph.gerund if ph else f"completing {task}"

    def coalition_names(self, coalition) -> str:
        """Join display names: "Robot I", "Robot I and Robot II", ..."""
        names = [self.display(i) for i in sorted(coalition)]
        if len(names) == 1:
            return names[0]
        return ", ".join(names[:-1]) + " and " + names[-1]

    def to_dict(self) -> dict:
        return {
            "agentNoun": self.agent_noun,
            "groupNoun": self.group_noun,
            "tasks": {
                t: {"infinitive": p.infinitive, "gerund": p.gerund}
                for t, p in sorted(self.phrases.items())
            },
        }

    @classmethod
    def from_dict(cls, data: dict | None) -> "Naming":
        if not data:
            return cls()
        phrases = {
            name: TaskPhrases(entry["infinitive"], entry["gerund"])
            for name, entry in data.get("tasks", {}).items()
        }
        return cls(
            agent_noun=data.get("agentNoun", "agent"),
            group_noun=data.get("groupNoun", "agents"),
            phrases=phrases,
        )


def event_atom(task: str, coalition, naming: Naming) -> str:
    """Atomic proposition for a completed task, e.g. fire_robotII_robotIII."""
    parts = [task] + [naming.atom(i) for i in sorted(coalition)]
    return "_".join(parts)
