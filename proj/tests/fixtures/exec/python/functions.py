# Self-contained functions with driver cases in cases.json.


def clamp(value, low, high):
    # keep value inside [low, high]
    if value < low:
        return low
    elif value > high:
        return high
    return value


def sum_of_squares(n):
    total = 0
    for i in range(n):
        total += i * i
    return total


def count_vowels(text):
    count = 0
    for ch in text.lower():
        if ch in "aeiou":
            count += 1
    return count


def sign(x):
    result = 1 if x > 0 else -1
    if x == 0:
        result = 0
    return result


def fizzbuzz(n):
    out = []
    for i in range(1, n + 1):
        if i % 15 == 0:
            out.append("FizzBuzz")
        elif i % 3 == 0:
            out.append("Fizz")
        elif i % 5 == 0:
            out.append("Buzz")
        else:
            out.append(str(i))
    return out


def gcd(a, b):
    while b != 0:
        a, b = b, a % b
    return abs(a)


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def word_lengths(sentence):
    words = sentence.split()
    lengths = {}
    for word in words:
        key = word.strip(".,!?").lower()
        lengths[key] = len(key)
    return sorted(lengths.items())


def running_mean(values):
    means = []
    total = 0.0
    for i in range(len(values)):
        total += values[i]
        means.append(round(total / (i + 1), 6))
    return means


def classify_temperature(celsius):
    if not (celsius < 0 or celsius > 40):
        label = "mild"
    else:
        label = "extreme"
    return label


def normalize_scores(scores):
    # scale into [0, 1]
    if not scores:
        return []
    lo = min(scores)
    hi = max(scores)
    span = hi - lo if hi != lo else 1
    return [round((s - lo) / span, 4) for s in scores]


def collatz_steps(n):
    steps = 0
    while n != 1:
        if n % 2 == 0:
            n //= 2
        else:
            n = 3 * n + 1
        steps += 1
    return steps


def reverse_words(sentence):
    parts = sentence.split(" ")
    parts.reverse()
    return " ".join(parts)


def histogram(values, bins):
    counts = [0] * bins
    lo = min(values)
    width = (max(values) - lo) / bins or 1
    for v in values:
        index = int((v - lo) / width)
        if index >= bins:
            index = bins - 1
        counts[index] += 1
    return counts


def parse_pairs(text):
    result = {}
    for chunk in text.split(";"):
        if "=" not in chunk:
            continue
        key, _, value = chunk.partition("=")
        result[key.strip()] = value.strip()
    return result


def max_subarray(nums):
    best = nums[0]
    current = 0
    for x in nums:
        current = max(x, current + x)
        best = max(best, current)
    return best


def digits_sum(n):
    n = abs(n)
    total = 0
    while n > 0:
        total += n % 10
        n //= 10
    return total


def pad_left(text, width, fill=" "):
    missing = width - len(text)
    return fill * missing + text if missing > 0 else text


def merge_sorted(left, right):
    merged = []
    i = 0
    j = 0
    while i < len(left) and j < len(right):
        if left[i] <= right[j]:
            merged.append(left[i])
            i += 1
        else:
            merged.append(right[j])
            j += 1
    merged.extend(left[i:])
    merged.extend(right[j:])
    return merged


def binary_search(items, target):
    lo = 0
    hi = len(items) - 1
    while lo <= hi:
        mid = (lo + hi) // 2
        if items[mid] == target:
            return mid
        if items[mid] < target:
            lo = mid + 1
        else:
            hi = mid - 1
    return -1


def caesar(text, shift):
    out = []
    for ch in text:
        if ch.isalpha():
            base = ord("a") if ch.islower() else ord("A")
            out.append(chr((ord(ch) - base + shift) % 26 + base))
        else:
            out.append(ch)
    return "".join(out)


def dot(u, v):
    acc = 0
    for k in range(len(u)):
        acc += u[k] * v[k]
    return acc


def median(values):
    ordered = sorted(values)
    n = len(ordered)
    middle = n // 2
    if n % 2 == 1:
        return ordered[middle]
    return (ordered[middle - 1] + ordered[middle]) / 2


def format_duration(seconds):
    hours = seconds // 3600
    minutes = seconds % 3600 // 60
    rest = seconds % 60
    return "%02d:%02d:%02d" % (hours, minutes, rest)


def flatten(nested):
    flat = []
    for group in nested:
        for item in group:
            flat.append(item)
    return flat


def compound_interest(principal, rate, years):
    amount = principal
    for _ in range(years):
        amount *= 1 + rate / 100
    return round(amount, 2)


def title_case(text):
    words = []
    for w in text.split():
        words.append(w[:1].upper() + w[1:].lower())
    return " ".join(words)
