/**
 * Pure form-state transitions for the defect reporting form.
 *
 * Every helper returns a fresh FormState; nothing mutates in place, which
 * keeps eager draft saving and re-rendering trivially consistent. The
 * console never invents ids: rows come from the technique's requirements
 * and every selectable specification id originates in the session payload.
 */

import type { FormRowState, FormState } from "./api.js";

export function emptyForm(requirementIds: string[]): FormState {
  return {
    rows: requirementIds.map((id) => ({
      requirement_id: id,
      om: false,
      am: [],
      is: [],
      if: [],
    })),
    free_findings: [],
  };
}

export function cloneForm(form: FormState): FormState {
  return {
    rows: form.rows.map((row) => ({
      requirement_id: row.requirement_id,
      om: row.om,
      am: [...row.am],
      is: row.is.map((group) => [...group]),
      if: [...row.if],
    })),
    free_findings: form.free_findings.map((finding) => ({ ...finding })),
  };
}

function updateRow(
  form: FormState,
  requirementId: string,
  update: (row: FormRowState) => FormRowState,
): FormState {
  return {
    rows: form.rows.map((row) =>
      row.requirement_id === requirementId ? update(row) : row,
    ),
    free_findings: form.free_findings,
  };
}

export function toggleOmission(form: FormState, requirementId: string): FormState {
  return updateRow(form, requirementId, (row) => ({ ...row, om: !row.om }));
}

/** Add the spec id to the AM or IF column if absent, remove it if present. */
export function toggleMark(
  form: FormState,
  requirementId: string,
  column: "am" | "if",
  specId: string,
): FormState {
  return updateRow(form, requirementId, (row) => {
    const current = row[column];
    const next = current.includes(specId)
      ? current.filter((id) => id !== specId)
      : [...current, specId];
    return { ...row, [column]: next };
  });
}

/**
 * Stage an inconsistency group on a row. Groups are meant to hold two or
 * more mutually conflicting specifications; smaller selections are still
 * staged (the server rejects them at submit time with an inline finding)
 * so no inspector input is ever dropped client-side.
 */
export function addGroup(
  form: FormState,
  requirementId: string,
  specIds: string[],
): FormState {
  const unique = [...new Set(specIds)];
  if (unique.length === 0) {
    return form;
  }
  return updateRow(form, requirementId, (row) => {
    if (row.is.some((group) => sameGroup(group, unique))) {
      return row;
    }
    return { ...row, is: [...row.is, unique] };
  });
}

export function removeGroup(
  form: FormState,
  requirementId: string,
  index: number,
): FormState {
  return updateRow(form, requirementId, (row) => ({
    ...row,
    is: row.is.filter((_, i) => i !== index),
  }));
}

export function sameGroup(a: string[], b: string[]): boolean {
  if (a.length !== b.length) return false;
  const sortedA = [...a].sort();
  const sortedB = [...b].sort();
  return sortedA.every((id, i) => id === sortedB[i]);
}

export function formsEqual(a: FormState, b: FormState): boolean {
  return JSON.stringify(normalize(a)) === JSON.stringify(normalize(b));
}

function normalize(form: FormState): unknown {
  return {
    rows: form.rows.map((row) => ({
      requirement_id: row.requirement_id,
      om: row.om,
      am: [...row.am].sort(),
      is: row.is.map((group) => [...group].sort()).sort(),
      if: [...row.if].sort(),
    })),
    free_findings: form.free_findings,
  };
}

/** Marks recorded on a form, for the progress line. */
export function countMarks(form: FormState): number {
  let total = form.free_findings.length;
  for (const row of form.rows) {
    if (row.om) total += 1;
    total += row.am.length + row.if.length;
    for (const group of row.is) total += group.length;
  }
  return total;
}

/** Rows with staged groups below the two-member minimum. */
export function undersizedGroupRows(form: FormState): string[] {
  return form.rows
    .filter((row) => row.is.some((group) => new Set(group).size < 2))
    .map((row) => row.requirement_id);
}
