#  Copyright 2024 Amazon.com, Inc. or its affiliates.

from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple, Union

from ..backfill.types import EventBundle
from ..common.dates import format_timestamp
from ..common.io import content_hash
from .errors import TemplateError

TICKER_PLACEHOLDER = "{{.Ticker}}"
DATE_PLACEHOLDER = "{{.Date}}"
HYPOTHESIS_PREFIX = "## hypothesis:"
NO_EVENTS_MARKER = "NO EVENTS"

# Shipped with the package: baseline.txt plus the mut*.txt mutation set.
DEFAULT_PROMPT_DIR = Path(__file__).resolve().parent.parent / "data" / "prompts"


@dataclass(frozen=True)
class PromptTemplate:
    """
    Instruction text sent to the extractor. The hash covers the body only, so two templates with identical text
    share cached extractions regardless of id or lineage.
    """

    id: str
    body: str
    lineage: Optional[str] = None
    hash: str = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "hash", content_hash(self.body))

    def validate(self) -> "PromptTemplate":
        for placeholder in (TICKER_PLACEHOLDER, DATE_PLACEHOLDER):
            count = self.body.count(placeholder)
            if count != 1:
                raise TemplateError(f"Template {self.id} contains {placeholder} {count} times, expected exactly once")
        return self

    @property
    def is_valid(self) -> bool:
        try:
            self.validate()
        except TemplateError:
            return False
        return True


def split_hypothesis(text: str) -> Tuple[str, str]:
    """
    Separate an optional leading ``## hypothesis:`` line from a template file.

    :param text: Raw file content.
    :return: (hypothesis, body); the hypothesis is empty when the header is absent.
    """
    first, _, rest = text.partition("\n")
    if first.strip().lower().startswith(HYPOTHESIS_PREFIX):
        return first.strip()[len(HYPOTHESIS_PREFIX) :].strip(), rest
    return "", text


def load_template(path: Union[str, Path], lineage: Optional[str] = None) -> PromptTemplate:
    """
    Load a template file; the id is the file stem.

    :param path: UTF-8 text file.
    :param lineage: Optional parent template id.
    :return: The template (not yet validated).
    """
    path = Path(path)
    _, body = split_hypothesis(path.read_text(encoding="utf-8"))
    return PromptTemplate(id=path.stem, body=body.strip() + "\n", lineage=lineage)


def load_templates(directory: Union[str, Path], pattern: str = "*.txt") -> List[PromptTemplate]:
    return [load_template(path) for path in sorted(Path(directory).glob(pattern))]


def render_prompt(template: PromptTemplate, bundle: EventBundle) -> str:
    """
    Substitute the ticker and ISO date into the template and append the bundle's items in stored order.

    :param template: A template with both placeholders exactly once.
    :param bundle: Possibly empty bundle.
    :return: Prompt text; an empty bundle yields an explicit NO EVENTS marker.
    """
    template.validate()
    text = template.body.replace(TICKER_PLACEHOLDER, bundle.ticker).replace(DATE_PLACEHOLDER, bundle.date.isoformat())
    if bundle.is_empty:
        return f"{text}\n\nEVENTS:\n{NO_EVENTS_MARKER}\n"
    lines = [f"{text}\n\nEVENTS:"]
    for position, item in enumerate(bundle.items, start=1):
        lines.append(f"[{position}] {format_timestamp(item.published_at)} {item.kind.value} ({item.source_id})")
        lines.append(item.headline)
        if item.body:
            lines.append(item.body)
    return "\n".join(lines) + "\n"
