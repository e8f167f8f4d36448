// Idempotence guard for submit buttons: while a keyed action is in flight,
// repeat invocations return the same promise instead of firing again.

const pending = new Map<string, Promise<unknown>>();

export function guarded<T>(key: string, action: () => Promise<T>): Promise<T> {
  const existing = pending.get(key);
  if (existing) {
    return existing as Promise<T>;
  }
  const promise = action().finally(() => {
    pending.delete(key);
  });
  pending.set(key, promise);
  return promise;
}

export function pendingCount(): number {
  return pending.size;
}
