"""spendtrace: attribute real-money spend to in-game items, exactly.

An event-sourced ledger tracks how money flows through chains of virtual
currencies into items using FIFO/LIFO lot accounting with exact rational
arithmetic, and explains every attributed figure step by step.
"""

from .errors import (
    DuplicateEventId,
    EmptyChain,
    InsufficientBalance,
    InvalidDateRange,
    NonPositiveQuantity,
    RealCurrencyInVirtualPosition,
    StaleEvent,
    TrackerError,
    UnknownAttribution,
    UnknownCurrency,
)
from .ledger import Ledger, Wallet, chain_price, consume
from .model import (
    Attribution,
    Consumption,
    CurrencyId,
    Event,
    Exchange,
    Grant,
    ItemPurchase,
    ItemSale,
    Kind,
    Lot,
    Money,
    RealMoneyPurchase,
    Strategy,
    Trace,
    real_currency,
    virtual_currency,
)
from .money import display_2dp, exact_str, parse_decimal
from .reports import (
    DateRange,
    build_report_document,
    render_json,
    report_by_date,
    report_spend_by_currency,
)
from .trace import build_trace

__all__ = [
    "Attribution",
    "Consumption",
    "CurrencyId",
    "DateRange",
    "DuplicateEventId",
    "EmptyChain",
    "Event",
    "Exchange",
    "Grant",
    "InsufficientBalance",
    "InvalidDateRange",
    "ItemPurchase",
    "ItemSale",
    "Kind",
    "Ledger",
    "Lot",
    "Money",
    "NonPositiveQuantity",
    "RealCurrencyInVirtualPosition",
    "RealMoneyPurchase",
    "StaleEvent",
    "Strategy",
    "Trace",
    "TrackerError",
    "UnknownAttribution",
    "UnknownCurrency",
    "Wallet",
    "build_report_document",
    "build_trace",
    "chain_price",
    "consume",
    "display_2dp",
    "exact_str",
    "parse_decimal",
    "real_currency",
    "render_json",
    "report_by_date",
    "report_spend_by_currency",
    "virtual_currency",
]
