package org.example.service;

import java.io.BufferedReader;
import java.io.IOException;
import java.io.StringReader;
import java.time.Duration;
import java.util.ArrayList;
import java.util.LinkedHashMap;
import java.util.List;
import java.util.Map;
import java.util.concurrent.atomic.AtomicInteger;
import java.util.function.Function;

public class Service<K, V> {
  private final Map<K, V> cache = new LinkedHashMap<>();
  private final Function<K, V> loader;
  private final AtomicInteger hits = new AtomicInteger();
  private final int capacity;

  public Service(Function<K, V> loader, int capacity) {
    this.loader = loader;
    this.capacity = capacity;
  }

  public synchronized V get(K key) {
    V value = cache.get(key);
    if (value != null) {
      hits.incrementAndGet();
      return value;
    }
    value = loader.apply(key);
    cache.put(key, value);
    evict();
    return value;
  }

  private void evict() {
    while (cache.size() > capacity) {
      K oldest = cache.keySet().iterator().next();
      cache.remove(oldest);
    }
  }

  public int hitCount() {
    return hits.get();
  }

  public double hitRatio(int requests) {
    return requests == 0 ? 0.0 : (double) hits.get() / requests;
  }

  public List<K> keys() {
    return new ArrayList<>(cache.keySet());
  }

  public void clear() {
    synchronized (this) {
      cache.clear();
      hits.set(0);
    }
  }

  public static Map<String, String> parseConfig(String text) throws IOException {
    Map<String, String> out = new LinkedHashMap<>();
    try (BufferedReader reader = new BufferedReader(new StringReader(text))) {
      String line;
      while ((line = reader.readLine()) != null) {
        line = line.trim();
        if (line.isEmpty() || line.startsWith("#")) {
          continue;
        }
        int eq = line.indexOf('=');
        if (eq < 0) {
          throw new IOException("bad line: " + line);
        }
        out.put(line.substring(0, eq).trim(), line.substring(eq + 1).trim());
      }
    }
    return out;
  }

  public static Duration backoff(int attempt, Duration base, Duration cap) {
    long millis = base.toMillis();
    for (int i = 0; i < attempt; i++) {
      millis *= 2;
      if (millis > cap.toMillis()) {
        return cap;
      }
    }
    return Duration.ofMillis(millis);
  }

  public static int retry(Runnable task, int attempts) {
    int failures = 0;
    for (int i = 0; i < attempts; i++) {
      try {
        task.run();
        return failures;
      } catch (RuntimeException e) {
        failures++;
      }
    }
    return failures;
  }

  public static String joinNonEmpty(List<String> parts, String separator) {
    StringBuilder sb = new StringBuilder();
    for (String p : parts) {
      if (p == null || p.isEmpty()) {
        continue;
      }
      if (sb.length() > 0) {
        sb.append(separator);
      }
      sb.append(p);
    }
    return sb.toString();
  }

  public static boolean isValidPort(String text) {
    try {
      int port = Integer.parseInt(text);
      return port > 0 && port < 65536;
    } catch (NumberFormatException e) {
      return false;
    }
  }

  public static String statusLine(int code) {
    String reason;
    switch (code) {
      case 200:
        reason = "OK";
        break;
      case 404:
        reason = "Not Found";
        break;
      case 500:
        reason = "Internal Server Error";
        break;
      default:
        reason = "Unknown";
    }
    return "HTTP/1.1 " + code + " " + reason;
  }

  public static String level(int severity) {
    return switch (severity) {
      case 0 -> "debug";
      case 1 -> "info";
      case 2 -> "warn";
      default -> "error";
    };
  }

  @Override
  public String toString() {
    return "Service[size=" + cache.size() + ", hits=" + hits.get() + "]";
  }

  public static long checksum(byte[] data) {
    long a = 1;
    long b = 0;
    for (byte x : data) {
      a = (a + (x & 0xff)) % 65521;
      b = (b + a) % 65521;
    }
    return (b << 16) | a;
  }

  public static int[] histogram(int[] values, int bins, int max) {
    int[] counts = new int[bins];
    for (int v : values) {
      int index = v * bins / (max + 1);
      if (index >= bins) {
        index = bins - 1;
      }
      counts[index] += 1;
    }
    return counts;
  }

  interface Listener {
    void onEvent(String name);

    default void onError(Exception e) {
      System.err.println("error: " + e.getMessage());
    }
  }

  public static String repeat(char c, int times) {
    char[] buf = new char[times];
    for (int i = 0; i < times; i++) {
      buf[i] = c;
    }
    return new String(buf);
  }
}
