package org.example.ledger;

import java.math.BigDecimal;
import java.util.ArrayList;
import java.util.Collections;
import java.util.HashMap;
import java.util.List;
import java.util.Map;
import java.util.Objects;
import java.util.Optional;
import java.util.stream.Collectors;

/** A simple double-entry ledger. */
public class Ledger {
  private final Map<String, Long> balances = new HashMap<>();
  private final List<Entry> entries = new ArrayList<>();
  private int sequence;

  public Ledger() {
    this.sequence = 0;
  }

  public Ledger(Map<String, Long> opening) {
    this();
    for (Map.Entry<String, Long> e : opening.entrySet()) {
      balances.put(e.getKey(), e.getValue());
    }
  }

  /** Moves {@code amount} cents between accounts. */
  public int transfer(String from, String to, long amount) {
    if (amount <= 0) {
      throw new IllegalArgumentException("amount must be positive");
    }
    long available = balances.getOrDefault(from, 0L);
    if (available < amount) {
      throw new IllegalStateException("insufficient funds in " + from);
    }
    balances.put(from, available - amount);
    balances.merge(to, amount, Long::sum);
    sequence += 1;
    entries.add(new Entry(sequence, from, to, amount));
    return sequence;
  }

  public long balance(String account) {
    return balances.getOrDefault(account, 0L);
  }

  public long total() {
    long sum = 0;
    for (long v : balances.values()) {
      sum += v;
    }
    return sum;
  }

  public List<String> overdrawn() {
    List<String> out = new ArrayList<>();
    for (Map.Entry<String, Long> e : balances.entrySet()) {
      if (e.getValue() < 0) {
        out.add(e.getKey());
      }
    }
    Collections.sort(out);
    return out;
  }

  public Optional<Entry> largest() {
    Entry best = null;
    for (Entry e : entries) {
      if (best == null || e.amount() > best.amount()) {
        best = e;
      }
    }
    return Optional.ofNullable(best);
  }

  public Map<String, Long> outflows() {
    return entries.stream()
        .collect(Collectors.groupingBy(Entry::from, Collectors.summingLong(Entry::amount)));
  }

  public String statement(String account) {
    StringBuilder sb = new StringBuilder();
    sb.append("Statement for ").append(account).append('\n');
    for (Entry e : entries) {
      if (e.from().equals(account)) {
        sb.append("  -").append(e.amount()).append(" to ").append(e.to()).append('\n');
      } else if (e.to().equals(account)) {
        sb.append("  +").append(e.amount()).append(" from ").append(e.from()).append('\n');
      }
    }
    return sb.toString();
  }

  public static String formatCents(long cents) {
    String sign = cents < 0 ? "-" : "";
    long abs = Math.abs(cents);
    return sign + (abs / 100) + "." + String.format("%02d", abs % 100);
  }

  public static long parseCents(String text) {
    BigDecimal value = new BigDecimal(text.trim());
    return value.movePointRight(2).longValueExact();
  }

  @Override
  public boolean equals(Object other) {
    if (this == other) {
      return true;
    }
    if (!(other instanceof Ledger)) {
      return false;
    }
    Ledger that = (Ledger) other;
    return balances.equals(that.balances) && entries.equals(that.entries);
  }

  @Override
  public int hashCode() {
    return Objects.hash(balances, entries);
  }

  public int compactHistory(int keep) {
    int removed = 0;
    while (entries.size() > keep) {
      entries.remove(0);
      removed++;
    }
    return removed;
  }

  public record Entry(int id, String from, String to, long amount) {
    public Entry {
      Objects.requireNonNull(from);
      Objects.requireNonNull(to);
    }

    public boolean involves(String account) {
      return from.equals(account) || to.equals(account);
    }
  }

  static long interest(long principal, int basisPoints, int periods) {
    long value = principal;
    for (int i = 0; i < periods; i++) {
      value += value * basisPoints / 10000;
    }
    return value;
  }

  static int countAbove(long[] amounts, long threshold) {
    int count = 0;
    for (int i = 0; i < amounts.length; i++) {
      if (amounts[i] > threshold) {
        count++;
      }
    }
    return count;
  }
}
