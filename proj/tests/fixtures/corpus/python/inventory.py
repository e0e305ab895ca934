"""Inventory bookkeeping helpers."""
import json
import logging
from collections import defaultdict
from dataclasses import dataclass, field

log = logging.getLogger(__name__)
DEFAULT_LIMIT = 25


@dataclass
class Item:
    sku: str
    quantity: int = 0
    tags: list = field(default_factory=list)

    def restock(self, amount):
        """Add stock; negative amounts are rejected."""
        if amount < 0:
            raise ValueError("amount must be positive")
        self.quantity += amount
        return self.quantity

    def take(self, amount):
        available = min(amount, self.quantity)
        self.quantity -= available
        return available

    @property
    def empty(self):
        return self.quantity == 0


class Inventory:
    def __init__(self, items=None):
        self._items = {}
        for item in items or []:
            self._items[item.sku] = item

    def add(self, sku, quantity=1):
        item = self._items.get(sku)
        if item is None:
            item = Item(sku)
            self._items[sku] = item
        item.restock(quantity)
        return item

    def total_units(self):
        total = 0
        for item in self._items.values():
            total += item.quantity
        return total

    def low_stock(self, threshold=5):
        # items that should be reordered soon
        return sorted(sku for sku, item in self._items.items() if item.quantity < threshold)

    def by_tag(self):
        groups = defaultdict(list)
        for item in self._items.values():
            for tag in item.tags:
                groups[tag].append(item.sku)
        return dict(groups)

    @classmethod
    def from_json(cls, text):
        data = json.loads(text)
        items = [Item(entry["sku"], entry.get("quantity", 0)) for entry in data]
        return cls(items)

    def to_json(self):
        rows = [{"sku": i.sku, "quantity": i.quantity} for i in self._items.values()]
        return json.dumps(rows, sort_keys=True)

    def remove_empty(self):
        removed = 0
        for sku in list(self._items):
            if self._items[sku].empty:
                del self._items[sku]
                removed += 1
        log.debug("removed %d empty items", removed)
        return removed


def reorder_plan(inventory, targets, limit=DEFAULT_LIMIT):
    plan = {}
    for sku, target in targets.items():
        item = inventory._items.get(sku)
        have = item.quantity if item else 0
        if have < target:
            plan[sku] = min(target - have, limit)
    return plan


def parse_line(line):
    """Parse 'sku,quantity' with optional whitespace."""
    sku, _, raw = line.partition(",")
    try:
        quantity = int(raw.strip())
    except ValueError:
        quantity = 0
    return sku.strip(), quantity


def load_csv(path):
    rows = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip() or line.startswith("#"):
                continue
            rows.append(parse_line(line))
    return rows


def summarize(rows):
    counts = {}
    for sku, quantity in rows:
        counts[sku] = counts.get(sku, 0) + quantity
    best = max(counts, key=counts.get) if counts else None
    return {"distinct": len(counts), "best": best, "units": sum(counts.values())}


def chunked(seq, size):
    if size <= 0:
        raise ValueError("size must be positive")
    return [seq[i:i + size] for i in range(0, len(seq), size)]


async def fetch_all(client, skus):
    results = {}
    for sku in skus:
        response = await client.get(f"/items/{sku}")
        results[sku] = response.status
    return results


def price_with_tax(price, rate=0.2, rounding=2):
    gross = price * (1 + rate)
    return round(gross, rounding)


def apply_discounts(prices, discounts):
    adjusted = []
    for price, discount in zip(prices, discounts):
        value = price - price * discount / 100
        adjusted.append(value if value > 0 else 0)
    return adjusted


def describe(item):
    status = "empty" if item.quantity == 0 else "in stock"
    return f"{item.sku}: {status} ({item.quantity})"
