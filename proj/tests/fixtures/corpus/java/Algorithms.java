package org.example.algo;

import java.util.ArrayDeque;
import java.util.ArrayList;
import java.util.Arrays;
import java.util.Deque;
import java.util.HashMap;
import java.util.List;
import java.util.Map;

public final class Algorithms {
  private Algorithms() {}

  public static int gcd(int a, int b) {
    while (b != 0) {
      int t = a % b;
      a = b;
      b = t;
    }
    return Math.abs(a);
  }

  public static boolean isPrime(int n) {
    if (n < 2) {
      return false;
    }
    for (int d = 2; d * d <= n; d++) {
      if (n % d == 0) {
        return false;
      }
    }
    return true;
  }

  public static int binarySearch(int[] items, int target) {
    int lo = 0;
    int hi = items.length - 1;
    while (lo <= hi) {
      int mid = (lo + hi) >>> 1;
      if (items[mid] == target) {
        return mid;
      } else if (items[mid] < target) {
        lo = mid + 1;
      } else {
        hi = mid - 1;
      }
    }
    return -1;
  }

  public static void bubbleSort(int[] a) {
    boolean swapped = true;
    int n = a.length;
    while (swapped) {
      swapped = false;
      for (int i = 1; i < n; i++) {
        if (a[i - 1] > a[i]) {
          int tmp = a[i - 1];
          a[i - 1] = a[i];
          a[i] = tmp;
          swapped = true;
        }
      }
      n--;
    }
  }

  public static int[] mergeSorted(int[] left, int[] right) {
    int[] out = new int[left.length + right.length];
    int i = 0, j = 0, k = 0;
    while (i < left.length && j < right.length) {
      out[k++] = left[i] <= right[j] ? left[i++] : right[j++];
    }
    while (i < left.length) {
      out[k++] = left[i++];
    }
    while (j < right.length) {
      out[k++] = right[j++];
    }
    return out;
  }

  public static long fibonacci(int n) {
    long a = 0;
    long b = 1;
    for (int i = 0; i < n; i++) {
      long next = a + b;
      a = b;
      b = next;
    }
    return a;
  }

  public static int maxSubarray(int[] nums) {
    int best = nums[0];
    int current = 0;
    for (int x : nums) {
      current = Math.max(x, current + x);
      best = Math.max(best, current);
    }
    return best;
  }

  public static List<Integer> sieve(int limit) {
    boolean[] composite = new boolean[limit + 1];
    List<Integer> primes = new ArrayList<>();
    for (int p = 2; p <= limit; p++) {
      if (!composite[p]) {
        primes.add(p);
        for (long q = (long) p * p; q <= limit; q += p) {
          composite[(int) q] = true;
        }
      }
    }
    return primes;
  }

  public static boolean balanced(String text) {
    Deque<Character> stack = new ArrayDeque<>();
    for (char c : text.toCharArray()) {
      switch (c) {
        case '(':
        case '[':
          stack.push(c);
          break;
        case ')':
          if (stack.isEmpty() || stack.pop() != '(') return false;
          break;
        case ']':
          if (stack.isEmpty() || stack.pop() != '[') return false;
          break;
        default:
          break;
      }
    }
    return stack.isEmpty();
  }

  public static int editDistance(String a, String b) {
    int[][] dp = new int[a.length() + 1][b.length() + 1];
    for (int i = 0; i <= a.length(); i++) {
      dp[i][0] = i;
    }
    for (int j = 0; j <= b.length(); j++) {
      dp[0][j] = j;
    }
    for (int i = 1; i <= a.length(); i++) {
      for (int j = 1; j <= b.length(); j++) {
        int cost = a.charAt(i - 1) == b.charAt(j - 1) ? 0 : 1;
        dp[i][j] = Math.min(Math.min(dp[i - 1][j] + 1, dp[i][j - 1] + 1), dp[i - 1][j - 1] + cost);
      }
    }
    return dp[a.length()][b.length()];
  }

  public static Map<Character, Integer> letterCounts(String text) {
    Map<Character, Integer> counts = new HashMap<>();
    for (char c : text.toLowerCase().toCharArray()) {
      if (Character.isLetter(c)) {
        counts.merge(c, 1, Integer::sum);
      }
    }
    return counts;
  }

  public static int[] prefixSums(int[] xs) {
    int[] sums = new int[xs.length];
    int running = 0;
    for (int i = 0; i < xs.length; i++) {
      running += xs[i];
      sums[i] = running;
    }
    return sums;
  }

  public static String reverseWords(String sentence) {
    String[] parts = sentence.trim().split("\\s+");
    StringBuilder sb = new StringBuilder();
    for (int i = parts.length - 1; i >= 0; i--) {
      sb.append(parts[i]);
      if (i > 0) {
        sb.append(' ');
      }
    }
    return sb.toString();
  }

  public static int collatzSteps(long n) {
    int steps = 0;
    while (n != 1) {
      n = n % 2 == 0 ? n / 2 : 3 * n + 1;
      steps++;
    }
    return steps;
  }

  public static double median(double[] values) {
    double[] copy = Arrays.copyOf(values, values.length);
    Arrays.sort(copy);
    int mid = copy.length / 2;
    if (copy.length % 2 == 1) {
      return copy[mid];
    }
    return (copy[mid - 1] + copy[mid]) / 2.0;
  }

  public static String toBinary(int value) {
    if (value == 0) {
      return "0";
    }
    StringBuilder bits = new StringBuilder();
    int v = value;
    while (v > 0) {
      bits.insert(0, v & 1);
      v >>= 1;
    }
    return bits.toString();
  }

  public static int digitsSum(int n) {
    int total = 0;
    n = Math.abs(n);
    while (n > 0) {
      total += n % 10;
      n /= 10;
    }
    return total;
  }

  static <T extends Comparable<T>> T maxOf(List<T> items) {
    T best = items.get(0);
    for (T item : items) {
      if (item.compareTo(best) > 0) {
        best = item;
      }
    }
    return best;
  }

  static String classify(int celsius) {
    String label;
    if (!(celsius < 0 || celsius > 40)) {
      label = "mild";
    } else {
      label = "extreme";
    }
    return label;
  }
}
