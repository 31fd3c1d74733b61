// Virtual-memory strategy: runs are chains of fixed-size pages. Pages emptied
// by a merge go to a free list and are reused for its output, so only
// O(sqrt(n T log n)) words are needed beyond the input itself.
//
// Page ids:
//   [0, m)          full pages of the input
//   m               trailing partial input page, if n % P != 0 (never freed)
//   [K, K + R)      preallocated reserve, K = ceil(n / P)
//   [K + R, ...)    pages allocated after the reserve ran dry
//
// Page lists and the free list are threaded through one successor table with
// a slot per page id.

#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "powersort/engine.hpp"

namespace powersort::vm {

using PageId = std::uint32_t;
inline constexpr PageId kNoPage = 0xffffffffu;

/// Smallest c with 2^c >= n (0 for n <= 1).
unsigned ceil_log2(std::size_t n);

/// Elements per page: the largest power of two <= sqrt(n / (T lg n)),
/// raised to at least 16 and then lowered to a power of two <= n.
std::size_t page_size(std::size_t n, std::size_t words_per_item);

/// Spare pages preallocated for a sort of n elements: one partial page per
/// possible stack entry (ceil(lg n) + 1) plus three for the merge in flight.
std::size_t reserve_pages(std::size_t n);

/// Extra words of a VM sort that never touches pages beyond the reserve:
/// reserve pages plus one successor slot per page id.
std::uint64_t preallocated_words(std::size_t n, std::size_t words_per_item, std::size_t page);

/// Half-open window [x, y) inside one page.
struct PageCursor {
  std::size_t x = 0;
  std::size_t y = 0;

  std::size_t remaining() const { return y - x; }
};

/// Merges as much of a[ca) and b[cb) into r[cr) as fits; returns once any of
/// the three windows is exhausted. Ties favour a. The loop bound is hoisted:
/// each round runs min(remaining) unchecked steps, which performs exactly
/// the comparisons and writes of the three-condition loop.
template <typename T, typename Compare>
void page_merge(std::span<T> a, PageCursor& ca, std::span<T> b, PageCursor& cb, std::span<T> r,
                PageCursor& cr, SortContext<Compare>& ctx) {
  for (;;) {
    std::size_t steps = std::min({ca.remaining(), cb.remaining(), cr.remaining()});
    if (steps == 0) return;
    std::size_t xa = ca.x;
    std::size_t xb = cb.x;
    std::size_t xr = cr.x;
    for (; steps > 0; --steps) {
      if (ctx.less(b[xb], a[xa])) {
        ctx.move(r[xr++], b[xb++]);
      } else {
        ctx.move(r[xr++], a[xa++]);
      }
    }
    ca.x = xa;
    cb.x = xb;
    cr.x = xr;
  }
}

/// A run stored as a chain of pages. Live elements occupy [front, end) of
/// the head page, whole middle pages, and [0, back) of the tail page.
struct PagedBuffer {
  PageId head = kNoPage;
  PageId tail = kNoPage;
  std::size_t front = 0;
  std::size_t back = 0;
  std::size_t lo = 0;
  std::size_t hi = 0;
  std::size_t pages = 0;

  std::size_t size() const { return hi - lo; }
  bool empty() const { return hi == lo; }
};

template <typename T>
class PagePool {
 public:
  PagePool(std::span<T> input, std::size_t page_capacity, std::size_t reserve)
      : input_(input), page_(page_capacity), reserve_(reserve) {
    if (page_ == 0 || (page_ & (page_ - 1)) != 0) {
      throw std::invalid_argument("PagePool: page capacity must be a power of two");
    }
    full_pages_ = input.size() / page_;
    tail_len_ = input.size() % page_;
    input_ids_ = full_pages_ + (tail_len_ ? 1 : 0);
    arena_.resize(reserve_ * page_);
    next_.assign(input_ids_ + reserve_, kNoPage);
    // The reserve starts out on the free list.
    for (std::size_t e = reserve_; e > 0; --e) push_free(static_cast<PageId>(input_ids_ + e - 1));
  }

  std::size_t page_capacity() const { return page_; }
  std::size_t input_page_count() const { return input_ids_; }
  std::size_t reserve() const { return reserve_; }
  std::size_t page_id_count() const { return next_.size(); }
  std::size_t free_count() const { return free_count_; }
  std::uint64_t acquisitions() const { return acquisitions_; }
  std::uint64_t underflows() const { return overflow_.size(); }

  std::size_t capacity(PageId id) const {
    return (tail_len_ && id == full_pages_) ? tail_len_ : page_;
  }
  bool freeable(PageId id) const { return !(tail_len_ && id == full_pages_); }

  std::span<T> page(PageId id) {
    if (id < input_ids_) return input_.subspan(id * page_, capacity(id));
    if (id < input_ids_ + reserve_) {
      return std::span<T>(arena_).subspan((id - input_ids_) * page_, page_);
    }
    return std::span<T>(overflow_[id - input_ids_ - reserve_].get(), page_);
  }

  PageId next(PageId id) const { return next_[id]; }
  void set_next(PageId id, PageId succ) { next_[id] = succ; }

  /// Words held beyond the input: spare pages and the successor table.
  std::uint64_t extra_words(std::size_t words_per_item) const {
    return (reserve_ + overflow_.size()) * page_ * words_per_item + next_.size();
  }

  /// Takes a page from the free list; allocates a fresh one if it is empty.
  PageId acquire() {
    ++acquisitions_;
    if (free_head_ != kNoPage) {
      PageId id = free_head_;
      free_head_ = next_[id];
      next_[id] = kNoPage;
      --free_count_;
      return id;
    }
    overflow_.push_back(std::make_unique<T[]>(page_));
    next_.push_back(kNoPage);
    return static_cast<PageId>(next_.size() - 1);
  }

  /// Returns a page to the free list. The trailing partial input page is
  /// never released.
  void release(PageId id) {
    if (freeable(id)) push_free(id);
  }

  /// Buffer over input[lo, hi), page aligned at lo, aliasing the input pages.
  PagedBuffer new_buffer(std::size_t lo, std::size_t hi) {
    if (lo % page_ != 0 || hi > input_.size() || lo > hi) {
      throw std::invalid_argument("PagePool::new_buffer: segment must start on a page boundary");
    }
    PagedBuffer buf;
    buf.lo = buf.hi = lo;
    for (std::size_t start = lo; start < hi; start += page_) {
      const std::size_t fill = std::min(page_, hi - start);
      append_page(buf, static_cast<PageId>(start / page_), fill);
    }
    return buf;
  }

  /// Appends a page holding `fill` elements at [0, fill). The buffer's
  /// current tail must be full.
  void append_page(PagedBuffer& buf, PageId id, std::size_t fill) {
    next_[id] = kNoPage;
    if (buf.tail == kNoPage) {
      buf.head = id;
      buf.front = 0;
    } else {
      next_[buf.tail] = id;
    }
    buf.tail = id;
    buf.back = fill;
    buf.hi += fill;
    ++buf.pages;
  }

  /// One past the last live slot of the head page.
  std::size_t head_end(const PagedBuffer& buf) const {
    return buf.head == buf.tail ? buf.back : capacity(buf.head);
  }

  /// Drops `count` elements from the front, releasing every page whose last
  /// element is consumed.
  void advance_front(PagedBuffer& buf, std::size_t count) {
    buf.lo += count;
    buf.front += count;
    while (buf.head != kNoPage && buf.front >= head_end(buf) &&
           (buf.head != buf.tail || buf.front == buf.back)) {
      const std::size_t consumed = head_end(buf);
      const PageId old = buf.head;
      const bool last = buf.head == buf.tail;
      buf.head = last ? kNoPage : next_[old];
      if (last) buf.tail = kNoPage;
      buf.front -= consumed;
      --buf.pages;
      next_[old] = kNoPage;
      release(old);
      if (last) {
        buf.front = buf.back = 0;
        break;
      }
    }
  }

  /// Makes sure the tail page of `buf` has a free slot.
  void ensure_room(PagedBuffer& buf) {
    if (buf.tail == kNoPage || buf.back == capacity(buf.tail)) append_page(buf, acquire(), 0);
  }

  /// Appends one element taken from `item`.
  template <typename Compare>
  void push_back(PagedBuffer& buf, T& item, SortContext<Compare>& ctx) {
    ensure_room(buf);
    ctx.move(page(buf.tail)[buf.back], item);
    ++buf.back;
    ++buf.hi;
  }

  /// Removes and returns the first element.
  template <typename Compare>
  T pop_front(PagedBuffer& buf, SortContext<Compare>& ctx) {
    if (buf.empty()) throw std::logic_error("PagePool::pop_front: empty buffer");
    T item = ctx.take(page(buf.head)[buf.front]);
    advance_front(buf, 1);
    return item;
  }

  /// Moves the first `count` elements of `src` to the back of `dst`, page by
  /// page.
  template <typename Compare>
  void move_front_to_back(PagedBuffer& src, PagedBuffer& dst, std::size_t count,
                          SortContext<Compare>& ctx) {
    while (count > 0) {
      ensure_room(dst);
      std::span<T> from = page(src.head);
      std::span<T> to = page(dst.tail);
      const std::size_t chunk =
          std::min({count, head_end(src) - src.front, capacity(dst.tail) - dst.back});
      for (std::size_t t = 0; t < chunk; ++t) ctx.move(to[dst.back + t], from[src.front + t]);
      dst.back += chunk;
      dst.hi += chunk;
      advance_front(src, chunk);
      count -= chunk;
    }
  }

  /// Hands the head page of `src` over to the back of `dst` without moving
  /// elements. Requires src.front == 0.
  void transfer_head_page(PagedBuffer& src, PagedBuffer& dst) {
    assert(src.front == 0);
    const PageId id = src.head;
    const std::size_t fill = head_end(src);
    const bool last = src.head == src.tail;
    src.head = last ? kNoPage : next_[id];
    if (last) {
      src.tail = kNoPage;
      src.back = 0;
    }
    src.lo += fill;
    --src.pages;
    append_page(dst, id, fill);
  }

  /// Checks page ownership: no page on two lists, page counts and sizes
  /// consistent, every page but the last full, and (for `aligned` buffers)
  /// the head page starts at offset 0.
  bool audit(std::span<const PagedBuffer* const> buffers,
             std::span<const std::uint8_t> aligned) const {
    std::vector<std::uint8_t> owner(next_.size(), 0);
    auto claim = [&](PageId id) {
      if (id >= owner.size() || owner[id]) return false;
      owner[id] = 1;
      return true;
    };
    std::size_t free_seen = 0;
    for (PageId id = free_head_; id != kNoPage; id = next_[id]) {
      if (!claim(id) || !freeable(id)) return false;
      ++free_seen;
    }
    if (free_seen != free_count_) return false;
    for (std::size_t b = 0; b < buffers.size(); ++b) {
      const PagedBuffer& buf = *buffers[b];
      if (buf.head == kNoPage) {
        if (buf.tail != kNoPage || buf.pages != 0 || !buf.empty()) return false;
        continue;
      }
      if (!aligned.empty() && aligned[b] && buf.front != 0) return false;
      std::size_t pages = 0;
      std::size_t elems = 0;
      for (PageId id = buf.head;; id = next_[id]) {
        if (!claim(id)) return false;
        ++pages;
        const std::size_t start = id == buf.head ? buf.front : 0;
        if (id == buf.tail) {
          if (buf.back > capacity(id) || buf.back < start) return false;
          elems += buf.back - start;
          if (next_[id] != kNoPage) return false;
          break;
        }
        elems += capacity(id) - start;
        if (next_[id] == kNoPage) return false;
      }
      if (pages != buf.pages || elems != buf.size()) return false;
    }
    return true;
  }

  /// Writes the contents of `curr`, which must hold all n elements in page
  /// aligned form, back to the input in logical order. Returns the number of
  /// pages parked in a spare page before being overwritten. Consumes the
  /// pool: the successor table is reused as scratch space.
  template <typename Compare>
  std::size_t copy_out(PagedBuffer& curr, SortContext<Compare>& ctx);

 private:
  void push_free(PageId id) {
    next_[id] = free_head_;
    free_head_ = id;
    ++free_count_;
  }

  std::span<T> input_;
  std::size_t page_;
  std::size_t reserve_;
  std::size_t full_pages_ = 0;
  std::size_t tail_len_ = 0;
  std::size_t input_ids_ = 0;
  std::vector<T> arena_;
  std::vector<std::unique_ptr<T[]>> overflow_;
  std::vector<PageId> next_;
  PageId free_head_ = kNoPage;
  std::size_t free_count_ = 0;
  std::uint64_t acquisitions_ = 0;
};

template <typename T>
template <typename Compare>
std::size_t PagePool<T>::copy_out(PagedBuffer& curr, SortContext<Compare>& ctx) {
  const std::size_t n = input_.size();
  if (n == 0) return 0;
  if (curr.lo != 0 || curr.hi != n || curr.front != 0 || curr.pages != input_ids_) {
    throw std::logic_error("PagePool::copy_out: buffer does not hold the whole input " + std::to_string(curr.lo) + " " + std::to_string(curr.hi) + " " + std::to_string(curr.front) + " " + std::to_string(curr.pages));
  }
  constexpr PageId kMark = 0x80000000u;
  const std::size_t k_pos = input_ids_;
  const std::size_t ids = next_.size();
  auto len_at = [&](std::size_t pos) { return pos + 1 == k_pos ? n - (k_pos - 1) * page_ : page_; };
  auto move_page = [&](PageId from, PageId to, std::size_t len) {
    std::span<T> src = page(from);
    std::span<T> dst = page(to);
    for (std::size_t t = 0; t < len; ++t) ctx.move(dst[t], src[t]);
  };

  // Label every page with the position its contents belong to: pages of
  // curr get 0..K-1 in list order, all other pages the virtual slots K...
  // kNoPage carries the mark bit, so clear it first.
  for (PageId& link : next_) {
    if (link == kNoPage) link = ~kMark;
  }
  PageId x = curr.head;
  for (std::size_t k = 0; k < k_pos; ++k) {
    const PageId succ = next_[x];
    next_[x] = static_cast<PageId>(k) | kMark;
    x = succ;
  }
  std::size_t virt = k_pos;
  for (std::size_t id = 0; id < ids; ++id) {
    if (!(next_[id] & kMark)) next_[id] = static_cast<PageId>(virt++) | kMark;
  }
  assert(virt == ids);

  // Invert the labelling in place: afterwards next_[pos] is the page whose
  // contents belong at pos.
  for (std::size_t i = 0; i < ids; ++i) {
    if (!(next_[i] & kMark)) continue;
    PageId prev = static_cast<PageId>(i);
    PageId cur = next_[i] & ~kMark;
    while (cur != i) {
      const PageId succ = next_[cur] & ~kMark;
      next_[cur] = prev;
      prev = cur;
      cur = succ;
    }
    next_[i] = prev;
  }
  std::vector<PageId>& src = next_;

  // Chains start at positions whose page holds nothing live (free pages and
  // the trailing partial page sit at virtual slots) and end at a spare page.
  for (std::size_t v = k_pos; v < ids; ++v) {
    std::size_t pos = src[v];
    while (pos < k_pos) {
      const PageId from = src[pos];
      move_page(from, static_cast<PageId>(pos), len_at(pos));
      src[pos] = static_cast<PageId>(pos) | kMark;
      pos = from;
    }
  }

  // What is left are cycles among input pages: park one page in a spare
  // page and rotate.
  std::size_t evictions = 0;
  const PageId spare = static_cast<PageId>(k_pos);
  for (std::size_t k = 0; k < k_pos; ++k) {
    if ((src[k] & kMark) || src[k] == k) continue;
    std::size_t last = k;
    while (src[last] != k) last = src[last];
    move_page(static_cast<PageId>(k), spare, len_at(last));
    ++evictions;
    std::size_t pos = k;
    for (;;) {
      const PageId from = src[pos];
      move_page(from == k ? spare : from, static_cast<PageId>(pos), len_at(pos));
      src[pos] = static_cast<PageId>(pos) | kMark;
      if (from == k) break;
      pos = from;
    }
  }

  curr = PagedBuffer{};
  std::fill(next_.begin(), next_.end(), kNoPage);
  free_head_ = kNoPage;
  free_count_ = 0;
  return evictions;
}

/// Stably merges `a` (page aligned) with the first `b_len` elements of
/// `b_src` into a new page-aligned buffer. Input pages are released as soon
/// as they are consumed, before the next output page is requested. When both
/// runs fit in a's single page the result is built in that page.
template <typename T, typename Compare>
PagedBuffer merge_buffers_paged(PagePool<T>& pool, PagedBuffer& a, PagedBuffer& b_src,
                                std::size_t b_len, SortContext<Compare>& ctx) {
  const std::size_t a_len = a.size();
  if (a_len == 0 || b_len == 0 || b_len > b_src.size() || a.hi != b_src.lo) {
    throw std::invalid_argument("merge_buffers_paged: runs must be non-empty and adjacent");
  }
  ctx.record_merge(a_len, b_len);

  if (a.pages == 1 && a.front == 0 && a_len + b_len <= pool.capacity(a.head)) {
    // Right to left into a's page; b spans at most two pages.
    std::span<T> out = pool.page(a.head);
    std::span<T> b_parts[2];
    std::size_t first = std::min(b_len, pool.head_end(b_src) - b_src.front);
    b_parts[0] = pool.page(b_src.head).subspan(b_src.front, first);
    if (first < b_len) b_parts[1] = pool.page(pool.next(b_src.head)).subspan(0, b_len - first);
    std::size_t xa = a_len;
    std::size_t w = a_len + b_len;
    int part = b_parts[1].empty() ? 0 : 1;
    std::size_t xb = b_parts[part].size();
    while (xa > 0 && part >= 0) {
      if (ctx.less(b_parts[part][xb - 1], out[xa - 1])) {
        ctx.move(out[--w], out[--xa]);
      } else {
        ctx.move(out[--w], b_parts[part][--xb]);
        if (xb == 0 && --part >= 0) xb = b_parts[part].size();
      }
    }
    while (part >= 0) {
      ctx.move(out[--w], b_parts[part][--xb]);
      if (xb == 0 && --part >= 0) xb = b_parts[part].size();
    }
    pool.advance_front(b_src, b_len);
    PagedBuffer result = a;
    result.back = a_len + b_len;
    result.hi = a.hi + b_len;
    a = PagedBuffer{};
    return result;
  }

  PagedBuffer out;
  out.lo = out.hi = a.lo;
  std::size_t rem_a = a_len;
  std::size_t rem_b = b_len;
  while (rem_a > 0 && rem_b > 0) {
    pool.ensure_room(out);
    PageCursor ca{a.front, pool.head_end(a)};
    PageCursor cb{b_src.front, std::min(pool.head_end(b_src), b_src.front + rem_b)};
    PageCursor cr{out.back, pool.capacity(out.tail)};
    page_merge(pool.page(a.head), ca, pool.page(b_src.head), cb, pool.page(out.tail), cr, ctx);
    const std::size_t took_a = ca.x - a.front;
    const std::size_t took_b = cb.x - b_src.front;
    out.back = cr.x;
    out.hi += took_a + took_b;
    rem_a -= took_a;
    rem_b -= took_b;
    pool.advance_front(a, took_a);
    pool.advance_front(b_src, took_b);
  }

  // Remaining tail of whichever run is left: whole pages are relinked when
  // both sides sit on a page boundary, everything else is moved.
  PagedBuffer& rest = rem_a > 0 ? a : b_src;
  std::size_t rem = rem_a > 0 ? rem_a : rem_b;
  while (rem > 0) {
    const bool out_full = out.tail == kNoPage || out.back == pool.capacity(out.tail);
    const std::size_t head_fill = pool.head_end(rest);
    if (out_full && rest.front == 0 && head_fill <= rem &&
        pool.capacity(rest.head) == pool.page_capacity() && pool.freeable(rest.head)) {
      pool.transfer_head_page(rest, out);
      rem -= head_fill;
      continue;
    }
    const std::size_t room = out_full ? pool.page_capacity() : pool.capacity(out.tail) - out.back;
    const std::size_t chunk = std::min({rem, room, head_fill - rest.front});
    pool.move_front_to_back(rest, out, chunk, ctx);
    rem -= chunk;
  }
  if (a.empty()) a = PagedBuffer{};
  return out;
}

struct VmOptions {
  /// 0 selects page_size(n, T).
  std::size_t page_capacity = 0;
  /// 0 selects reserve_pages(n).
  std::size_t reserve = 0;
  /// Verify page ownership after every merge and push.
  bool audit = false;
};

struct VmCounters {
  std::uint64_t page_acquisitions = 0;
  std::uint64_t free_list_underflows = 0;
  std::uint64_t copy_out_evictions = 0;
  std::uint64_t copy_out_moves = 0;
  std::size_t min_free_pages = 0;
};

template <typename T, typename Compare>
class VmStrategy {
 public:
  struct Run {
    std::size_t lo = 0;
    std::size_t hi = 0;
    // Resident runs have not left the work buffer yet: they are its prefix.
    bool resident = true;
    PagedBuffer buf;
  };

  VmStrategy(std::span<T> data, SortContext<Compare>& ctx, VmOptions options = {})
      : data_(data),
        ctx_(ctx),
        options_(options),
        pool_(data,
              options.page_capacity ? options.page_capacity
                                    : page_size(data.size(), payload_words_v<T>),
              options.reserve ? options.reserve : reserve_pages(data.size())) {
    work_ = pool_.new_buffer(0, data.size());
    counters_.min_free_pages = pool_.free_count();
    note_memory();
  }

  std::size_t size() const { return data_.size(); }
  bool work_empty() const { return scan_ == data_.size(); }
  SortContext<Compare>& context() { return ctx_; }
  const PagePool<T>& pool() const { return pool_; }
  const VmCounters& counters() const { return counters_; }

  Run extract_run(std::size_t min_len) {
    Run r;
    r.lo = scan_;
    r.hi = powersort::extract_run(data_, scan_, min_len, ctx_);
    scan_ = r.hi;
    return r;
  }

  Run merge(Run top, Run curr, MergeRole) {
    assert(!top.resident && top.hi == curr.lo);
    if (options_.audit) {
      if (shadow_.empty() || shadow_.back().lo != top.buf.lo) {
        throw std::logic_error("VmStrategy: merge does not pop the stack top");
      }
      shadow_.pop_back();
    }
    PagedBuffer& b_src = curr.resident ? work_ : curr.buf;
    if (curr.resident) assert(work_.lo == curr.lo);
    Run out;
    out.lo = top.lo;
    out.hi = curr.hi;
    out.resident = false;
    out.buf = merge_buffers_paged(pool_, top.buf, b_src, curr.hi - curr.lo, ctx_);
    after_step(&out.buf);
    return out;
  }

  Run push(Run r) {
    if (r.resident) {
      assert(work_.lo == r.lo);
      PagedBuffer buf;
      buf.lo = buf.hi = r.lo;
      pool_.move_front_to_back(work_, buf, r.hi - r.lo, ctx_);
      r.buf = buf;
      r.resident = false;
    }
    if (options_.audit) shadow_.push_back(r.buf);
    after_step(nullptr);
    return r;
  }

  void finish(Run curr) {
    // A single resident run covering the input is already in place.
    if (curr.resident) return;
    const std::uint64_t before = ctx_.stats().moves;
    counters_.copy_out_evictions = pool_.copy_out(curr.buf, ctx_);
    counters_.copy_out_moves = ctx_.stats().moves - before;
  }

 private:
  void note_memory() {
    ctx_.note_extra_words(pool_.extra_words(payload_words_v<T>));
    counters_.page_acquisitions = pool_.acquisitions();
    counters_.free_list_underflows = pool_.underflows();
    counters_.min_free_pages = std::min(counters_.min_free_pages, pool_.free_count());
  }

  void after_step(const PagedBuffer* result) {
    note_memory();
    if (!options_.audit) return;
    std::vector<const PagedBuffer*> bufs{&work_};
    std::vector<std::uint8_t> aligned{0};
    for (const auto& b : shadow_) {
      bufs.push_back(&b);
      aligned.push_back(1);
    }
    if (result) {
      bufs.push_back(result);
      aligned.push_back(1);
    }
    if (!pool_.audit(bufs, aligned)) {
      throw std::logic_error("VmStrategy: page ownership audit failed");
    }
  }

  std::span<T> data_;
  SortContext<Compare>& ctx_;
  VmOptions options_;
  PagePool<T> pool_;
  PagedBuffer work_;
  std::size_t scan_ = 0;
  std::vector<PagedBuffer> shadow_;
  VmCounters counters_;
};

}  // namespace powersort::vm
